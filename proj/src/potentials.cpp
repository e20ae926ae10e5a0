#include "leakyline/potentials.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace leakyline {

double LinePotential::Term::eval(double x) const {
    switch (kind) {
        case Kind::gaussian: {
            double t = (x - center) / width;
            return depth * std::exp(-0.5 * t * t);
        }
        case Kind::box:
            return (std::abs(x - center) <= width) ? depth : 0.0;
        case Kind::constant:
            return level;
        case Kind::tabulated: {
            if (values.empty()) return 0.0;
            double t = (x - x0) / dx;
            if (t < 0 || t > double(values.size() - 1)) return 0.0;
            auto i = static_cast<size_t>(t);
            if (i + 1 >= values.size()) return values.back();
            double w = t - double(i);
            return values[i] * (1 - w) + values[i + 1] * w;
        }
    }
    return 0.0;
}

LinePotential LinePotential::zero() { return LinePotential{}; }

LinePotential LinePotential::gaussian(double depth, double center, double width) {
    if (!(width > 0)) throw std::invalid_argument("gaussian width must be positive");
    LinePotential p;
    Term t;
    t.kind = Term::Kind::gaussian;
    t.depth = depth;
    t.center = center;
    t.width = width;
    p.terms_.push_back(t);
    p.refresh_sup_norm();
    return p;
}

LinePotential LinePotential::box(double depth, double center, double half_width) {
    if (!(half_width > 0)) throw std::invalid_argument("box half_width must be positive");
    LinePotential p;
    Term t;
    t.kind = Term::Kind::box;
    t.depth = depth;
    t.center = center;
    t.width = half_width;
    p.terms_.push_back(t);
    p.refresh_sup_norm();
    return p;
}

LinePotential LinePotential::constant(double level) {
    LinePotential p;
    if (level != 0) {
        Term t;
        t.kind = Term::Kind::constant;
        t.level = level;
        p.terms_.push_back(t);
    }
    p.refresh_sup_norm();
    return p;
}

LinePotential LinePotential::tabulated(std::span<const double> xs, std::span<const double> vs) {
    if (xs.size() != vs.size() || xs.size() < 2)
        throw std::invalid_argument("tabulated profile needs matching x/v arrays, size >= 2");
    double dx = xs[1] - xs[0];
    if (!(dx > 0)) throw std::invalid_argument("tabulated x grid must be strictly increasing");
    for (size_t i = 1; i < xs.size(); ++i) {
        double d = xs[i] - xs[i - 1];
        if (std::abs(d - dx) > 1e-9 * std::max(1.0, std::abs(dx)))
            throw std::invalid_argument("tabulated x grid must be uniform");
    }
    LinePotential p;
    Term t;
    t.kind = Term::Kind::tabulated;
    t.x0 = xs[0];
    t.dx = dx;
    t.values.assign(vs.begin(), vs.end());
    p.terms_.push_back(t);
    p.refresh_sup_norm();
    return p;
}

LinePotential LinePotential::operator+(const LinePotential& other) const {
    LinePotential p;
    p.terms_ = terms_;
    p.terms_.insert(p.terms_.end(), other.terms_.begin(), other.terms_.end());
    p.refresh_sup_norm();
    return p;
}

LinePotential LinePotential::scaled(double factor) const {
    LinePotential p = *this;
    for (auto& t : p.terms_) {
        t.depth *= factor;
        t.level *= factor;
        for (auto& v : t.values) v *= factor;
    }
    p.refresh_sup_norm();
    return p;
}

double LinePotential::operator()(double x) const {
    double s = 0;
    for (const auto& t : terms_) s += t.eval(x);
    return s;
}

std::vector<double> LinePotential::sample(std::span<const double> nodes) const {
    std::vector<double> out(nodes.size());
    for (size_t i = 0; i < nodes.size(); ++i) out[i] = (*this)(nodes[i]);
    return out;
}

bool LinePotential::is_zero() const {
    if (terms_.empty()) return true;
    return sup_norm_ == 0.0;
}

double LinePotential::support_radius() const {
    double r = 0;
    for (const auto& t : terms_) {
        switch (t.kind) {
            case Term::Kind::gaussian:
                // |depth| e^{-u^2/2} < 1e-14 |depth|  =>  u > 8.03
                r = std::max(r, std::abs(t.center) + 8.1 * t.width);
                break;
            case Term::Kind::box:
                r = std::max(r, std::abs(t.center) + t.width);
                break;
            case Term::Kind::constant:
                if (t.level != 0) r = std::max(r, std::numeric_limits<double>::infinity());
                break;
            case Term::Kind::tabulated: {
                double hi = t.x0 + t.dx * double(t.values.size() - 1);
                r = std::max(r, std::max(std::abs(t.x0), std::abs(hi)));
                break;
            }
        }
    }
    return r;
}

void LinePotential::refresh_sup_norm() {
    // Exact for single terms; dense scan for sums (heuristic, documented).
    double s = 0;
    bool single = terms_.size() <= 1;
    if (single) {
        for (const auto& t : terms_) {
            switch (t.kind) {
                case Term::Kind::gaussian:
                case Term::Kind::box: s = std::abs(t.depth); break;
                case Term::Kind::constant: s = std::abs(t.level); break;
                case Term::Kind::tabulated:
                    for (double v : t.values) s = std::max(s, std::abs(v));
                    break;
            }
        }
        sup_norm_ = s;
        return;
    }
    double r = 0;
    for (const auto& t : terms_) {
        if (t.kind == Term::Kind::constant && t.level != 0) r = std::max(r, 10.0);
        else if (t.kind == Term::Kind::gaussian) r = std::max(r, std::abs(t.center) + 8.1 * t.width);
        else if (t.kind == Term::Kind::box) r = std::max(r, std::abs(t.center) + t.width);
        else if (t.kind == Term::Kind::tabulated && !t.values.empty())
            r = std::max(r, std::max(std::abs(t.x0), std::abs(t.x0 + t.dx * double(t.values.size() - 1))));
    }
    r = std::max(r, 1.0);
    const int n = 20001;
    for (int i = 0; i < n; ++i) {
        double x = -r + 2 * r * double(i) / double(n - 1);
        s = std::max(s, std::abs((*this)(x)));
    }
    sup_norm_ = s;
}

std::optional<DecayCertificate> LinePotential::exponential_decay() const {
    if (is_zero()) return DecayCertificate{1.0, 0.0};
    double Ktot = 0;
    for (const auto& t : terms_) {
        switch (t.kind) {
            case Term::Kind::gaussian: {
                // super-exponential tails: C = 1 works, K = sup |V| e^{|x|}
                // for a gaussian the max of e^{|x|-((x-c)/w)^2/2} sits at |x| = |c| + w^2
                double xm = std::abs(t.center) + t.width * t.width;
                double u = (xm - std::abs(t.center)) / t.width;
                Ktot += std::abs(t.depth) * std::exp(xm - 0.5 * u * u);
                break;
            }
            case Term::Kind::box:
                Ktot += std::abs(t.depth) * std::exp(std::abs(t.center) + t.width);
                break;
            case Term::Kind::constant:
                if (t.level != 0) return std::nullopt;
                break;
            case Term::Kind::tabulated:
                return std::nullopt;  // no certified tail information
        }
    }
    return DecayCertificate{1.0, Ktot};
}

VanishingCheck LinePotential::check_vanishing(double tol) const {
    if (is_zero()) return {true, 0.0};
    for (const auto& t : terms_)
        if (t.kind == Term::Kind::constant && t.level != 0) return {false, 0.0};

    double sup = support_radius();
    if (!std::isfinite(sup)) return {false, 0.0};
    double R = 2.0 * std::max(10.0, sup);
    const int n = 10000;
    std::vector<double> absx(n), val(n);
    for (int i = 0; i < n; ++i) {
        absx[i] = R * double(i) / double(n - 1);
        val[i] = std::max(std::abs((*this)(absx[i])), std::abs((*this)(-absx[i])));
    }
    // running sup from the right; candidate L values are the grid points
    double run = 0;
    int best = -1;
    for (int i = n - 1; i >= 0; --i) {
        if (i + 1 < n) run = std::max(run, val[i + 1]);
        if (run < tol) best = i; else break;
    }
    if (best < 0) return {false, R};
    // smallest tested L: first grid point from the left with tail sup < tol
    return {true, absx[best]};
}

double LinePotential::integral() const {
    double s = 0;
    for (const auto& t : terms_) {
        switch (t.kind) {
            case Term::Kind::gaussian:
                s += t.depth * t.width * std::sqrt(2 * pi);
                break;
            case Term::Kind::box:
                s += t.depth * 2 * t.width;
                break;
            case Term::Kind::constant:
                if (t.level != 0) throw numeric_error("integral of non-decaying profile");
                break;
            case Term::Kind::tabulated: {
                double acc = 0;
                for (size_t i = 0; i + 1 < t.values.size(); ++i)
                    acc += 0.5 * (t.values[i] + t.values[i + 1]) * t.dx;
                s += acc;
                break;
            }
        }
    }
    return s;
}

bool LinePotential::compactly_supported() const {
    for (const auto& t : terms_) {
        switch (t.kind) {
            case Term::Kind::box:
            case Term::Kind::tabulated: break;
            case Term::Kind::gaussian:
                if (t.depth != 0) return false;
                break;
            case Term::Kind::constant:
                if (t.level != 0) return false;
                break;
        }
    }
    return true;
}

std::vector<double> LinePotential::breakpoints() const {
    std::vector<double> out;
    for (const auto& t : terms_) {
        if (t.kind == Term::Kind::box) {
            out.push_back(t.center - t.width);
            out.push_back(t.center + t.width);
        } else if (t.kind == Term::Kind::tabulated && !t.values.empty()) {
            out.push_back(t.x0);
            out.push_back(t.x0 + t.dx * double(t.values.size() - 1));
        }
    }
    std::sort(out.begin(), out.end());
    out.erase(std::unique(out.begin(), out.end()), out.end());
    return out;
}

void ModelConfig::validate() const {
    if (!(alpha > 0)) throw std::invalid_argument("alpha must be positive");
    if (!(a > 0)) throw std::invalid_argument("a must be positive");
}

bool ModelConfig::mirror_symmetric() const {
    // structural check on a dense grid
    double r = std::max(v_plus.support_radius(), v_minus.support_radius());
    if (!std::isfinite(r)) r = 20;
    r = std::max(r, 1.0);
    for (int i = 0; i <= 400; ++i) {
        double x = -r + 2 * r * i / 400.0;
        if (std::abs(v_plus(x) - v_minus(x)) > 1e-12 * std::max(1.0, v_plus.sup_norm()))
            return false;
    }
    return true;
}

}  // namespace leakyline
