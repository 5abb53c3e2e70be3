#include "maxprod/kernels.hpp"

#include <cmath>
#include <cstdlib>

#ifdef MAXPROD_HAVE_OPENMP
#include <omp.h>
#endif

namespace maxprod {

using u128 = unsigned __int128;

int max_threads() {
#ifdef MAXPROD_HAVE_OPENMP
    static int cached = [] {
        if (const char* env = std::getenv("MAXPROD_THREADS")) {
            int v = std::atoi(env);
            if (v >= 1) return v;
        }
        return omp_get_max_threads();
    }();
    return cached;
#else
    return 1;
#endif
}

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

struct FactorSlots {
    double u, v, one_minus_u, one_minus_v;
    uint64_t step;   // n mod den
    bool on_circle;
};

// one angle; s2_tab[idx] = cos^2(pi idx / den) shared across factors
inline double angle_value(const std::vector<FactorSlots>& fs, std::int64_t den,
                          const std::vector<double>& s2_tab, std::int64_t i) {
    double sum = 0.0;
    uint64_t uden = uint64_t(den);
    for (const auto& f : fs) {
        uint64_t idx = uint64_t((u128(f.step) * uint64_t(i)) % uden);
        if (f.on_circle && 2 * idx == uden) return -kInf;
        double s2 = s2_tab[idx];
        double num_sq = f.one_minus_u * f.one_minus_u + 4.0 * f.u * s2;
        double den_sq = f.one_minus_v * f.one_minus_v + 4.0 * f.v * s2;
        if (num_sq == den_sq) continue;
        if (num_sq == 0.0) return -kInf;
        sum += 0.5 * (std::log(num_sq) - std::log(den_sq));
    }
    return sum;
}

std::vector<FactorSlots> live_slots(const PreparedCircle& pc) {
    std::vector<FactorSlots> fs;
    fs.reserve(pc.pf.size());
    for (const auto& pf : pc.pf) {
        if (pf.dead) continue;
        fs.push_back({pf.u, pf.v, pf.one_minus_u, pf.one_minus_v, pf.n_mod_den, pf.on_circle});
    }
    return fs;
}

std::vector<double> s2_table(std::int64_t den) {
    std::vector<double> tab(static_cast<std::size_t>(den), 0.0);
    for (std::int64_t j = 0; j < den; ++j) {
        double half = std::sin(3.14159265358979323846 *
                               (double(den) - 2.0 * double(j)) / (2.0 * double(den)));
        tab[std::size_t(j)] = half * half;
    }
    return tab;
}

} // namespace

void sample_circle_serial(const PreparedCircle& pc, std::int64_t den, std::span<double> out) {
    auto fs = live_slots(pc);
    auto tab = s2_table(den);
    for (std::int64_t i = 0; i < den; ++i)
        out[std::size_t(i)] = angle_value(fs, den, tab, i);
}

void sample_circle_parallel(const PreparedCircle& pc, std::int64_t den, std::span<double> out) {
#ifdef MAXPROD_HAVE_OPENMP
    auto fs = live_slots(pc);
    auto tab = s2_table(den);
    double* o = out.data();
#pragma omp parallel for schedule(static) num_threads(max_threads())
    for (std::int64_t i = 0; i < den; ++i)
        o[std::size_t(i)] = angle_value(fs, den, tab, i);
#else
    sample_circle_serial(pc, den, out);
#endif
}

void sample_circle(const PreparedCircle& pc, std::int64_t den, std::span<double> out) {
    if (max_threads() > 1 && den >= 512) sample_circle_parallel(pc, den, out);
    else sample_circle_serial(pc, den, out);
}

std::vector<double> sample_circle(const Product& p, Radius r, std::int64_t den, double tol) {
    PreparedCircle pc = prepare_circle(p, r, tol);
    pc.prepare_angles(den);
    std::vector<double> out(static_cast<std::size_t>(den), 0.0);
    sample_circle(pc, den, out);
    return out;
}

std::int64_t coprime_denominator(const Product& p, Radius r, std::int64_t q, double tol) {
    TruncationResult tr = p.truncation_index(r, tol);
    std::int64_t den = q + 1;
    if (den % 2 == 0) ++den;
    for (;; den += 2) {
        bool ok = true;
        for (std::size_t k = 0; k < tr.k_used && ok; ++k) {
            const Factor& f = p.factors[k];
            if (!f.n_materialized) continue;
            if (gcd_u64(f.n.mod_u64(uint64_t(den)), uint64_t(den)) != 1) ok = false;
        }
        if (ok) return den;
    }
}

} // namespace maxprod
