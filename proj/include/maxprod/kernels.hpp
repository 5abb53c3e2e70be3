// kernels.hpp — data-parallel sweeps over circle angles.
//
// The serial versions are the reference; the parallel versions must produce
// bit-identical output (each slot is written independently, reductions happen
// afterwards in index order).  MAXPROD_THREADS caps the OpenMP team size.

#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "maxprod/product.hpp"

namespace maxprod {

int max_threads();

// out[i] = log |f(r e^{2 pi i / den})| for i = 0..den-1
void sample_circle_serial(const PreparedCircle& pc, std::int64_t den, std::span<double> out);
void sample_circle_parallel(const PreparedCircle& pc, std::int64_t den, std::span<double> out);
void sample_circle(const PreparedCircle& pc, std::int64_t den, std::span<double> out);

// convenience: prepare + sample
std::vector<double> sample_circle(const Product& p, Radius r, std::int64_t den, double tol);

// Smallest odd denominator >= q + 1 that is coprime to every live factor
// exponent.  Power-of-two sample counts resonate with the dyadic weight's
// n_k = 2*32^(k-1) and collapse the trapezoid rule onto a single point, so
// the actual grid denominator must share no structure with the n_k.
std::int64_t coprime_denominator(const Product& p, Radius r, std::int64_t q, double tol);

} // namespace maxprod
