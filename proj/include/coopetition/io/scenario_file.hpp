#pragma once

#include <filesystem>
#include <limits>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <string_view>
#include <vector>

#include "coopetition/io/network_file.hpp"
#include "coopetition/io/text.hpp"
#include "coopetition/scenario.hpp"

namespace coop::io {

// key = value lines of one section, duplicates and unknown keys rejected.
class Fields {
public:
    Fields(const Section& sec, const std::string& source, std::set<std::string, std::less<>> known)
        : source_(source), section_(sec.name), line_(sec.number) {
        for (const auto& line : sec.lines) {
            auto a = split_assignment(line, source);
            if (!known.empty() && !known.contains(a.key))
                throw ParseError(source, a.line, "unknown key '" + a.key + "' in [" + sec.name + "]");
            if (!map_.emplace(a.key, a).second) throw ParseError(source, a.line, "duplicate key '" + a.key + "'");
        }
    }

    const std::map<std::string, Assignment>& all() const noexcept { return map_; }
    bool has(const std::string& key) const { return map_.contains(key); }

    const Assignment& required(const std::string& key) const {
        auto it = map_.find(key);
        if (it == map_.end())
            throw ParseError(source_, line_, "missing required field '" + key + "' in [" + section_ + "]");
        return it->second;
    }

    std::string text(const std::string& key) const {
        const auto& a = required(key);
        return unquote(a.value, source_, a.line);
    }
    double number(const std::string& key) const {
        const auto& a = required(key);
        return parse_double(a.value, source_, a.line, key);
    }
    int integer(const std::string& key) const {
        const auto& a = required(key);
        const long long v = parse_integer(a.value, source_, a.line, key);
        if (v < std::numeric_limits<int>::min() || v > std::numeric_limits<int>::max())
            throw ParseError(source_, a.line, "field '" + key + "' out of range");
        return int(v);
    }
    std::vector<double> numbers(const std::string& key) const {
        const auto& a = required(key);
        return parse_doubles(a.value, source_, a.line, key);
    }

    void maybe(const std::string& key, double& out) const {
        if (has(key)) out = number(key);
    }
    void maybe(const std::string& key, int& out) const {
        if (has(key)) out = integer(key);
    }

    // One value is broadcast to every actor.
    std::vector<double> per_actor(const std::string& key, std::size_t n) const {
        auto v = numbers(key);
        if (v.size() == 1) v.assign(n, v.front());
        if (v.size() != n)
            throw ParseError(source_, required(key).line,
                             "field '" + key + "' needs 1 or " + std::to_string(n) + " values, got " + std::to_string(v.size()));
        return v;
    }

    int line_of(const std::string& key) const { return required(key).line; }
    int section_line() const noexcept { return line_; }

private:
    std::string source_;
    std::string section_;
    int line_;
    std::map<std::string, Assignment> map_;
};

struct Override {
    std::string section;
    std::string key;
    std::string value;
};

// "section.key=value"
inline Override parse_override(std::string_view text) {
    const auto eq = text.find('=');
    const auto dot = text.find('.');
    if (eq == std::string_view::npos || dot == std::string_view::npos || dot > eq || dot == 0 || dot + 1 == eq)
        throw UsageError("override '" + std::string(text) + "' must look like section.key=value");
    return {std::string(trim(text.substr(0, dot))), std::string(trim(text.substr(dot + 1, eq - dot - 1))),
            std::string(trim(text.substr(eq + 1)))};
}

inline void apply_overrides(Document& doc, const std::vector<Override>& overrides) {
    for (const auto& o : overrides) {
        Section* target = nullptr;
        for (auto& s : doc.sections) {
            if (s.name != o.section) continue;
            if (target) throw UsageError("cannot override a key of the repeated section [" + o.section + "]");
            target = &s;
        }
        if (!target) {
            doc.sections.push_back({o.section, 0, {}});
            target = &doc.sections.back();
        }
        const std::string line = o.key + " = " + o.value;
        bool replaced = false;
        for (auto& l : target->lines) {
            const auto eq = l.text.find('=');
            if (eq != std::string::npos && trim(std::string_view(l.text).substr(0, eq)) == o.key) {
                l.text = line;
                replaced = true;
            }
        }
        if (!replaced) target->lines.push_back({line, 0});
    }
}

namespace detail {

inline const Section* unique_section(const Document& doc, std::string_view name, bool required) {
    const auto found = doc.named(name);
    if (found.size() > 1) throw ParseError(doc.source, found[1]->number, "duplicate section [" + std::string(name) + "]");
    if (found.empty() && required) throw ParseError(doc.source + ": missing required section [" + std::string(name) + "]");
    return found.empty() ? nullptr : found.front();
}

inline std::pair<std::size_t, std::size_t> dyad_key(const std::string& key, const std::vector<Actor>& actors,
                                                    const std::string& source, int line) {
    const auto dot = key.find('.');
    auto find = [&](const std::string& id) {
        for (std::size_t i = 0; i < actors.size(); ++i)
            if (actors[i].id == id) return i;
        throw ParseError(source, line, "unknown actor '" + id + "' in '" + key + "'");
    };
    if (dot == std::string::npos) throw ParseError(source, line, "expected 'depender.dependee', got '" + key + "'");
    const std::size_t i = find(key.substr(0, dot)), j = find(key.substr(dot + 1));
    if (i == j) throw ParseError(source, line, "self pair '" + key + "'");
    return {i, j};
}

// Prefix model errors with the source location.
template <class F>
auto with_location(const std::string& source, int line, F&& f) {
    try {
        return f();
    } catch (const ModelError& e) {
        throw ModelError(source + ":" + std::to_string(line) + ": " + e.what());
    }
}

} // namespace detail

inline const std::set<std::string, std::less<>>& scenario_sections() {
    static const std::set<std::string, std::less<>> s{"scenario", "actors",  "trust", "economy",
                                                      "interdependence", "initial", "phase"};
    return s;
}

inline TrustValues parse_trust_values(const Fields& f) {
    TrustValues v;
    f.maybe("lambda_plus", v.lambda_plus);
    f.maybe("lambda_minus", v.lambda_minus);
    f.maybe("mu_R", v.mu_R);
    f.maybe("delta_R", v.delta_R);
    f.maybe("xi", v.xi);
    f.maybe("rho", v.rho);
    f.maybe("kappa_trust", v.kappa_trust);
    f.maybe("discount", v.discount);
    return v;
}

inline std::set<std::string, std::less<>> trust_keys() {
    return {"lambda_plus", "lambda_minus", "mu_R", "delta_R", "xi", "rho", "kappa_trust", "discount"};
}

// extra_sections are tolerated and left to the caller.
inline Scenario parse_scenario(const Document& doc, const std::filesystem::path& base_dir,
                               const std::set<std::string, std::less<>>& extra_sections = {}) {
    const std::string& src = doc.source;
    for (const auto& s : doc.sections)
        if (!scenario_sections().contains(s.name) && !extra_sections.contains(s.name))
            throw ParseError(src, s.number, "unknown section [" + s.name + "]");

    Scenario sc;
    const Fields head(*detail::unique_section(doc, "scenario", true), src, {"name"});
    sc.name = head.text("name");

    const Section* actors = detail::unique_section(doc, "actors", true);
    for (const auto& line : actors->lines) {
        const auto a = split_assignment(line, src);
        for (const auto& other : sc.actors)
            if (other.id == a.key) throw ParseError(src, a.line, "duplicate actor '" + a.key + "'");
        if (a.key.find('.') != std::string::npos) throw ParseError(src, a.line, "actor id must not contain '.'");
        sc.actors.push_back({a.key, unquote(a.value, src, a.line)});
    }
    const std::size_t n = sc.actors.size();
    if (n < 2) throw ParseError(src, actors->number, "[actors] needs at least two actors");

    if (const Section* t = detail::unique_section(doc, "trust", false)) {
        const Fields f(*t, src, trust_keys());
        sc.trust_params = detail::with_location(src, t->number, [&] { return TrustParams(parse_trust_values(f)); });
    }

    sc.econ = default_economy(n);
    if (const Section* e = detail::unique_section(doc, "economy", false)) {
        const Fields f(*e, src, {"variant", "beta_exponent", "theta", "gamma", "shares", "endowments", "baselines", "reciprocity"});
        if (f.has("variant")) {
            const auto v = f.text("variant");
            if (v == "power") sc.econ.variant = ValueVariant::power;
            else if (v == "logarithmic") sc.econ.variant = ValueVariant::logarithmic;
            else throw ParseError(src, f.line_of("variant"), "variant must be power or logarithmic");
        }
        if (f.has("reciprocity")) {
            const auto v = f.text("reciprocity");
            if (v == "raw") sc.econ.reciprocity = ReciprocityForm::raw;
            else if (v == "bounded") sc.econ.reciprocity = ReciprocityForm::bounded;
            else throw ParseError(src, f.line_of("reciprocity"), "reciprocity must be raw or bounded");
        }
        f.maybe("beta_exponent", sc.econ.beta_exponent);
        f.maybe("theta", sc.econ.theta);
        f.maybe("gamma", sc.econ.gamma);
        if (f.has("shares")) sc.econ.shares = f.per_actor("shares", n);
        if (f.has("endowments")) sc.econ.endowments = f.per_actor("endowments", n);
        if (f.has("baselines")) sc.econ.baselines = f.per_actor("baselines", n);
        detail::with_location(src, e->number, [&] { validate(sc.econ); return 0; });
    }

    const Section* inter = detail::unique_section(doc, "interdependence", true);
    sc.D = InterdependenceMatrix(n);
    {
        const Fields f(*inter, src, {});
        if (f.has("network")) {
            if (f.all().size() != 1)
                throw ParseError(src, f.line_of("network"), "use either network = <file> or explicit pairs, not both");
            const auto path = base_dir / f.text("network");
            const DependencyNetwork net = load_network(path);
            const InterdependenceMatrix full = build_matrix(net);
            if (net.actors().size() != n)
                throw ParseError(src, f.line_of("network"), "network actors do not match [actors]");
            std::vector<std::size_t> map(n);
            for (std::size_t i = 0; i < n; ++i) {
                try {
                    map[i] = net.index_of(sc.actors[i].id);
                } catch (const ModelError&) {
                    throw ParseError(src, f.line_of("network"), "actor '" + sc.actors[i].id + "' missing from network");
                }
            }
            for (std::size_t i = 0; i < n; ++i)
                for (std::size_t j = 0; j < n; ++j)
                    if (i != j) sc.D.set(i, j, full(map[i], map[j]));
        } else {
            for (const auto& [key, a] : f.all()) {
                const auto [i, j] = detail::dyad_key(key, sc.actors, src, a.line);
                const double v = parse_double(a.value, src, a.line, key);
                detail::with_location(src, a.line, [&] { sc.D.set(i, j, v); return 0; });
            }
        }
    }

    DyadState init{0.5, 0.0};
    std::vector<std::pair<Assignment, std::pair<std::size_t, std::size_t>>> per_dyad;
    if (const Section* s = detail::unique_section(doc, "initial", false)) {
        const Fields f(*s, src, {});
        for (const auto& [key, a] : f.all()) {
            if (key == "trust") init.trust = parse_double(a.value, src, a.line, key);
            else if (key == "reputation_damage") init.reputation_damage = parse_double(a.value, src, a.line, key);
            else per_dyad.push_back({a, detail::dyad_key(key, sc.actors, src, a.line)});
        }
    }
    sc.initial = detail::with_location(src, 0, [&] { return SystemState(n, init); });
    for (const auto& [a, ij] : per_dyad) {
        const auto v = parse_doubles(a.value, src, a.line, a.key);
        if (v.size() != 2) throw ParseError(src, a.line, "initial dyad '" + a.key + "' needs trust and reputation_damage");
        detail::with_location(src, a.line, [&] { sc.initial.set(ij.first, ij.second, DyadState{v[0], v[1]}); return 0; });
    }

    for (const Section* s : doc.named("phase")) {
        const Fields f(*s, src, {"name", "duration", "deviation", "reference_trust"});
        PhaseSpec p;
        p.name = f.text("name");
        p.duration = f.integer("duration");
        if (p.duration < 1) throw ParseError(src, f.line_of("duration"), "phase duration must be at least 1");
        p.deviation = f.per_actor("deviation", n);
        if (f.has("reference_trust")) p.reference_trust = f.number("reference_trust");
        sc.phases.push_back(std::move(p));
    }
    if (sc.phases.empty()) throw ParseError(src + ": missing required section [phase]");
    detail::with_location(src, 0, [&] { validate(sc); return 0; });
    return sc;
}

inline std::string emit_trust_values(const TrustValues& v) {
    std::string out;
    out += "lambda_plus = " + format_exact(v.lambda_plus) + "\n";
    out += "lambda_minus = " + format_exact(v.lambda_minus) + "\n";
    out += "mu_R = " + format_exact(v.mu_R) + "\n";
    out += "delta_R = " + format_exact(v.delta_R) + "\n";
    out += "xi = " + format_exact(v.xi) + "\n";
    out += "rho = " + format_exact(v.rho) + "\n";
    out += "kappa_trust = " + format_exact(v.kappa_trust) + "\n";
    out += "discount = " + format_exact(v.discount) + "\n";
    return out;
}

// Fully explicit form; parse_scenario(emit_scenario(s)) == s.
inline std::string emit_scenario(const Scenario& s) {
    const std::size_t n = s.actors.size();
    std::string out = "[scenario]\nname = \"" + s.name + "\"\n\n[actors]\n";
    for (const auto& a : s.actors) out += a.id + " = \"" + a.name + "\"\n";
    out += "\n[trust]\n" + emit_trust_values(s.trust_params.values());
    out += "\n[economy]\n";
    out += "variant = " + std::string(to_string(s.econ.variant)) + "\n";
    out += "beta_exponent = " + format_exact(s.econ.beta_exponent) + "\n";
    out += "theta = " + format_exact(s.econ.theta) + "\n";
    out += "gamma = " + format_exact(s.econ.gamma) + "\n";
    out += "shares = " + format_exact(s.econ.shares) + "\n";
    out += "endowments = " + format_exact(s.econ.endowments) + "\n";
    out += "baselines = " + format_exact(s.econ.baselines) + "\n";
    out += "reciprocity = " + std::string(to_string(s.econ.reciprocity)) + "\n";
    out += "\n[interdependence]\n";
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j)
            if (i != j) out += s.actors[i].id + "." + s.actors[j].id + " = " + format_exact(s.D(i, j)) + "\n";
    out += "\n[initial]\n";
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j)
            if (i != j) {
                const DyadState& d = s.initial.at(i, j);
                out += s.actors[i].id + "." + s.actors[j].id + " = " + format_exact(d.trust) + " " +
                       format_exact(d.reputation_damage) + "\n";
            }
    for (const auto& p : s.phases) {
        out += "\n[phase]\nname = \"" + p.name + "\"\nduration = " + std::to_string(p.duration) +
               "\ndeviation = " + format_exact(p.deviation) + "\n";
        if (p.reference_trust) out += "reference_trust = " + format_exact(*p.reference_trust) + "\n";
    }
    return out;
}

inline constexpr std::string_view builtin_prefix = "builtin:";

// A scenario argument is a file path or builtin:<name>.
inline Document scenario_document(const std::string& location, std::filesystem::path& base_dir) {
    if (location.rfind(builtin_prefix, 0) == 0) {
        const std::string name = location.substr(builtin_prefix.size());
        if (name != "renault_nissan") throw UsageError("unknown builtin scenario '" + name + "'");
        base_dir = std::filesystem::current_path();
        return parse_document(emit_scenario(renault_nissan_scenario()), location);
    }
    const std::filesystem::path path(location);
    base_dir = path.parent_path().empty() ? std::filesystem::path(".") : path.parent_path();
    return parse_document(read_file(path), location);
}

inline Scenario load_scenario(const std::string& location, const std::vector<Override>& overrides = {}) {
    std::filesystem::path base;
    Document doc = scenario_document(location, base);
    apply_overrides(doc, overrides);
    return parse_scenario(doc, base);
}

} // namespace coop::io
