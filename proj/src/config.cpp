#include "leakyline/config.hpp"

#include <cctype>
#include <charconv>
#include <cmath>
#include <fstream>
#include <sstream>

namespace leakyline {

namespace {

std::string trim(const std::string& s) {
    size_t b = s.find_first_not_of(" \t\r\n");
    if (b == std::string::npos) return "";
    size_t e = s.find_last_not_of(" \t\r\n");
    return s.substr(b, e - b + 1);
}

std::vector<std::string> split_top_level(const std::string& s, char sep) {
    std::vector<std::string> parts;
    int depth = 0;
    std::string cur;
    for (char c : s) {
        if (c == '(') ++depth;
        if (c == ')') --depth;
        if (c == sep && depth == 0) {
            parts.push_back(cur);
            cur.clear();
        } else {
            cur += c;
        }
    }
    parts.push_back(cur);
    return parts;
}

double parse_num(const std::string& s) {
    std::string t = trim(s);
    try {
        size_t pos = 0;
        double v = std::stod(t, &pos);
        if (pos != t.size()) throw config_error("trailing characters in number: '" + s + "'");
        return v;
    } catch (const std::exception&) {
        throw config_error("cannot parse number: '" + s + "'");
    }
}

LinePotential parse_tabulated_csv(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw config_error("cannot open tabulated profile file: " + path);
    std::vector<double> xs, vs;
    std::string line;
    while (std::getline(in, line)) {
        line = trim(line);
        if (line.empty() || line[0] == '#') continue;
        auto cols = split_top_level(line, ',');
        if (cols.size() != 2) throw config_error("tabulated CSV needs two columns: " + path);
        xs.push_back(parse_num(cols[0]));
        vs.push_back(parse_num(cols[1]));
    }
    for (size_t i = 1; i < xs.size(); ++i)
        if (!(xs[i] > xs[i - 1]))
            throw config_error("tabulated CSV x column must be strictly increasing: " + path);
    return LinePotential::tabulated(xs, vs);
}

LinePotential parse_single(const std::string& text, const std::string& base_dir) {
    std::string t = trim(text);
    if (t.empty() || t == "zero" || t == "0") return LinePotential::zero();
    // optional scalar prefix: number * term
    auto star = split_top_level(t, '*');
    if (star.size() == 2) {
        double f = parse_num(star[0]);
        return parse_single(star[1], base_dir).scaled(f);
    }
    if (star.size() > 2) throw config_error("profile: at most one '*' per term: " + t);
    size_t open = t.find('(');
    if (open == std::string::npos || t.back() != ')')
        throw config_error("profile: expected name(args): '" + t + "'");
    std::string name = trim(t.substr(0, open));
    std::string args = t.substr(open + 1, t.size() - open - 2);
    auto parts = split_top_level(args, ',');
    if (name == "gaussian") {
        if (parts.size() != 3) throw config_error("gaussian(depth, center, width)");
        return LinePotential::gaussian(parse_num(parts[0]), parse_num(parts[1]), parse_num(parts[2]));
    }
    if (name == "box") {
        if (parts.size() != 3) throw config_error("box(depth, center, half_width)");
        return LinePotential::box(parse_num(parts[0]), parse_num(parts[1]), parse_num(parts[2]));
    }
    if (name == "constant") {
        if (parts.size() != 1) throw config_error("constant(level)");
        return LinePotential::constant(parse_num(parts[0]));
    }
    if (name == "tabulated") {
        if (parts.size() != 1) throw config_error("tabulated(path.csv)");
        std::string p = trim(parts[0]);
        if (!p.empty() && p.front() != '/') p = base_dir + "/" + p;
        return parse_tabulated_csv(p);
    }
    throw config_error("unknown profile kind: '" + name + "'");
}

}  // namespace

LinePotential parse_profile(const std::string& text, const std::string& base_dir) {
    auto terms = split_top_level(text, '+');
    LinePotential p = LinePotential::zero();
    for (const auto& t : terms) {
        if (trim(t).empty()) continue;
        p = p + parse_single(t, base_dir);
    }
    return p;
}

RunConfig RunConfig::parse_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw config_error("cannot open config file: " + path);
    std::stringstream ss;
    ss << in.rdbuf();
    std::string dir = ".";
    auto slash = path.find_last_of('/');
    if (slash != std::string::npos) dir = path.substr(0, slash);
    return parse_text(ss.str(), dir);
}

RunConfig RunConfig::parse_text(const std::string& text, const std::string& base_dir) {
    RunConfig c;
    c.base_dir_ = base_dir;
    std::stringstream ss(text);
    std::string line;
    int lineno = 0;
    while (std::getline(ss, line)) {
        ++lineno;
        auto hash = line.find('#');
        if (hash != std::string::npos) line = line.substr(0, hash);
        line = trim(line);
        if (line.empty()) continue;
        auto eq = line.find('=');
        if (eq == std::string::npos)
            throw config_error("config line " + std::to_string(lineno) + ": expected key = value");
        std::string key = trim(line.substr(0, eq)), val = trim(line.substr(eq + 1));
        if (key.empty()) throw config_error("config line " + std::to_string(lineno) + ": empty key");
        c.kv_[key] = val;
    }
    return c;
}

std::string RunConfig::get_string(const std::string& key) const {
    auto it = kv_.find(key);
    if (it == kv_.end()) throw config_error("missing config key: " + key);
    return it->second;
}

std::string RunConfig::get_string_or(const std::string& key, const std::string& dflt) const {
    auto it = kv_.find(key);
    return it == kv_.end() ? dflt : it->second;
}

double RunConfig::get_number(const std::string& key) const { return parse_num(get_string(key)); }

double RunConfig::get_number_or(const std::string& key, double dflt) const {
    auto it = kv_.find(key);
    return it == kv_.end() ? dflt : parse_num(it->second);
}

int RunConfig::get_int_or(const std::string& key, int dflt) const {
    return int(std::lround(get_number_or(key, dflt)));
}

std::vector<double> RunConfig::get_list_or(const std::string& key, std::vector<double> dflt) const {
    auto it = kv_.find(key);
    if (it == kv_.end()) return dflt;
    std::vector<double> out;
    for (const auto& p : split_top_level(it->second, ','))
        if (!trim(p).empty()) out.push_back(parse_num(p));
    return out;
}

ModelConfig RunConfig::model() const {
    ModelConfig cfg;
    cfg.alpha = get_number("model.alpha");
    cfg.a = get_number("model.a");
    cfg.v_plus = parse_profile(get_string_or("potential.v_plus", "zero"), base_dir_);
    cfg.v_minus = parse_profile(get_string_or("potential.v_minus", "zero"), base_dir_);
    cfg.validate();
    return cfg;
}

ModelConfig RunConfig::mirror_model() const {
    ModelConfig cfg;
    cfg.alpha = get_number("model.alpha");
    cfg.a = get_number("model.a");
    cfg.v_plus = parse_profile(get_string("potential.v0"), base_dir_);
    cfg.v_minus = cfg.v_plus;
    cfg.validate();
    return cfg;
}

LinePotential RunConfig::perturbant() const {
    return parse_profile(get_string("potential.v_p"), base_dir_);
}

QuadratureSpec RunConfig::quadrature(const ModelConfig& cfg) const {
    QuadratureSpec q = QuadratureSpec::suggested(cfg, get_int_or("quad.n_nodes", 512));
    if (has("quad.x_max")) {
        q.x_max = get_number("quad.x_max");
        q.n_nodes = get_int_or("quad.n_nodes", 512);
    }
    std::string rule = get_string_or("quad.rule", "midpoint");
    if (rule == "midpoint" || rule == "trapezoid" || rule == "uniform")
        q.rule = QuadratureSpec::Rule::uniform;
    else if (rule == "gauss" || rule == "gauss-legendre")
        q.rule = QuadratureSpec::Rule::gauss_panels;
    else
        throw config_error("quad.rule must be midpoint|trapezoid|gauss-legendre");
    return q;
}

}  // namespace leakyline
