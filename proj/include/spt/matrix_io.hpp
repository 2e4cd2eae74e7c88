// matrix_io.hpp: Hermitian matrix JSON {"dim", "re", "im"} and seeded random
// Hermitian generators.

#pragma once

#include "spt/operator_core.hpp"

#include <json.hpp>

#include <cstdint>
#include <random>
#include <string>

namespace spt {

nlohmann::json to_json(const Matrix& m);
// Validates shape and Hermitian symmetry.
HermitianOperator hermitian_from_json(const nlohmann::json& j);
HermitianOperator load_hermitian(const std::string& path);
void save_matrix(const Matrix& m, const std::string& path);

// Independent stream per (seed, trial).
std::mt19937_64 trial_rng(std::uint64_t seed, std::uint64_t trial);

// GUE sample with its spectrum mapped affinely onto [range.lo, range.hi].
HermitianOperator random_hermitian(std::mt19937_64& rng, std::size_t dim, const Interval& range);

// GUE sample scaled to operator norm 1.
HermitianOperator random_perturbation(std::mt19937_64& rng, std::size_t dim);

}  // namespace spt
