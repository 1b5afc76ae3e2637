#pragma once

#include <complex>
#include <span>
#include <vector>

namespace lvsmile {

// Divided difference of z -> e^{t z} over the node multiset. Confluent limits
// are handled exactly (repeated nodes yield derivative values, e.g. a double
// node gives t e^{t z}); at t = 0 the result is 0 for two or more distinct
// nodes. Node order does not matter.
std::complex<double> divided_diff_exp(double t, std::span<const std::complex<double>> nodes);

// Leading divided differences over node prefixes: out[n] is the divided
// difference of e^{t z} over nodes[0..n]. Preserves input order (each prefix
// is a distinct node set). out.size() must equal nodes.size().
void divided_diff_exp_prefixes(double t, std::span<const std::complex<double>> nodes,
                               std::span<std::complex<double>> out);

std::vector<std::complex<double>> divided_diff_exp_prefixes(
    double t, std::span<const std::complex<double>> nodes);

}  // namespace lvsmile
