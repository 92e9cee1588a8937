#pragma once

#include <array>
#include <filesystem>
#include <map>
#include <string>

#include "coopetition/io/text.hpp"
#include "coopetition/istar.hpp"

namespace coop::io {

inline DependencyNetwork parse_network(const Document& doc) {
    const std::string& src = doc.source;
    std::vector<Actor> actors;
    std::vector<Dependum> deps;
    bool saw_actors = false;
    for (const auto& sec : doc.sections) {
        if (sec.name == "actors") {
            if (saw_actors) throw ParseError(src, sec.number, "duplicate [actors] section");
            saw_actors = true;
            for (const auto& line : sec.lines) {
                const auto a = split_assignment(line, src);
                for (const auto& other : actors)
                    if (other.id == a.key) throw ParseError(src, a.line, "duplicate actor '" + a.key + "'");
                actors.push_back({a.key, unquote(a.value, src, a.line)});
            }
        } else if (sec.name == "dependums") {
            static constexpr std::array<const char*, 6> required{"depender", "dependee", "label", "kind", "weight", "criticality"};
            for (const auto& line : sec.lines) {
                std::map<std::string, Assignment> fields;
                for (auto& t : split_tokens(line, src)) {
                    if (std::find_if(required.begin(), required.end(), [&](const char* k) { return t.key == k; }) == required.end())
                        throw ParseError(src, t.line, "unknown dependum field '" + t.key + "'");
                    if (!fields.emplace(t.key, t).second) throw ParseError(src, t.line, "duplicate dependum field '" + t.key + "'");
                }
                for (const char* k : required)
                    if (!fields.contains(k)) throw ParseError(src, line.number, "dependum missing required field '" + std::string(k) + "'");
                Dependum d;
                d.depender = fields["depender"].value;
                d.dependee = fields["dependee"].value;
                d.label = fields["label"].value;
                const auto kind = parse_dependum_kind(fields["kind"].value);
                if (!kind) throw ParseError(src, line.number, "unknown dependum kind '" + fields["kind"].value + "'");
                d.kind = *kind;
                d.weight = parse_double(fields["weight"].value, src, line.number, "weight");
                d.criticality = parse_double(fields["criticality"].value, src, line.number, "criticality");
                deps.push_back(std::move(d));
            }
        } else {
            throw ParseError(src, sec.number, "unknown section [" + sec.name + "]");
        }
    }
    if (!saw_actors) throw ParseError(src + ": missing required section [actors]");
    try {
        return DependencyNetwork(std::move(actors), std::move(deps));
    } catch (const ModelError& e) {
        throw ParseError(src + ": " + e.what());
    }
}

inline DependencyNetwork load_network(const std::filesystem::path& path) {
    return parse_network(parse_document(read_file(path), path.string()));
}

inline std::string emit_network(const DependencyNetwork& net) {
    std::string out = "[actors]\n";
    for (const auto& a : net.actors()) out += a.id + " = \"" + a.name + "\"\n";
    out += "\n[dependums]\n";
    for (const auto& d : net.dependums())
        out += "depender=" + d.depender + " dependee=" + d.dependee + " label=\"" + d.label + "\" kind=" +
               std::string(to_string(d.kind)) + " weight=" + format_exact(d.weight) + " criticality=" +
               format_exact(d.criticality) + "\n";
    return out;
}

} // namespace coop::io
