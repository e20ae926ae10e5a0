#ifndef LEAKYLINE_CONFIG_HPP
#define LEAKYLINE_CONFIG_HPP

#include <map>
#include <optional>
#include <string>
#include <vector>

#include "leakyline/potentials.hpp"
#include "leakyline/quadrature.hpp"

namespace leakyline {

/// Parse a potential profile expression:
///   gaussian(depth, center, width) | box(depth, center, half_width) |
///   constant(level) | tabulated(path.csv) | zero | expr + expr |
///   <number> * expr
/// tabulated CSV: two columns "x,V(x)", strictly increasing uniform x.
LinePotential parse_profile(const std::string& text, const std::string& base_dir = ".");

class config_error : public std::runtime_error {
public:
    explicit config_error(const std::string& what) : std::runtime_error(what) {}
};

/// Flat key = value configuration with dotted key paths and '#' comments.
class RunConfig {
public:
    static RunConfig parse_file(const std::string& path);
    static RunConfig parse_text(const std::string& text, const std::string& base_dir = ".");

    bool has(const std::string& key) const { return kv_.count(key) > 0; }
    std::string get_string(const std::string& key) const;
    std::string get_string_or(const std::string& key, const std::string& dflt) const;
    double get_number(const std::string& key) const;
    double get_number_or(const std::string& key, double dflt) const;
    int get_int_or(const std::string& key, int dflt) const;
    std::vector<double> get_list_or(const std::string& key, std::vector<double> dflt) const;

    ModelConfig model() const;        // model.alpha, model.a, potential.v_plus/v_minus
    ModelConfig mirror_model() const; // potential.v0 on both lines
    LinePotential perturbant() const; // potential.v_p
    QuadratureSpec quadrature(const ModelConfig& cfg) const;

    const std::string& base_dir() const { return base_dir_; }

private:
    std::map<std::string, std::string> kv_;
    std::string base_dir_ = ".";
};

}  // namespace leakyline

#endif
