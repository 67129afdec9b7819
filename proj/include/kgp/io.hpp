// SPDX-License-Identifier: Apache-2.0

#ifndef KGP_IO_HPP
#define KGP_IO_HPP

#include <filesystem>
#include <string>
#include <vector>
#include <json.hpp>
#include "kgp/functional.hpp"
#include "kgp/nonlinearity.hpp"
#include "kgp/solver.hpp"
#include "kgp/wave_rep.hpp"

namespace kgp
{

using Json = nlohmann::json;

// 17 significant digits; "nan" and "inf" spelled out.
std::string format_double(double v);

// Writes through a temporary file in the same directory and renames it into place.
void write_file_atomic(const std::filesystem::path &path, const std::string &content);
std::string read_file(const std::filesystem::path &path);

//
// Coefficient files:
//   # kg-periodic coeffs v1, J=<J>, K=<K>, b=<b>, eps=<eps>
//   j,k,re_u,im_u,re_v,im_v        (1 <= j <= J, 0 <= k <= K)
//
std::string coefficients_csv(const FieldPair &state);
FieldPair parse_coefficients_csv(const std::string &text);
void write_coefficients(const std::filesystem::path &path, const FieldPair &state);
FieldPair read_coefficients(const std::filesystem::path &path);

// "const:<a>" or "cos_t:<base>,<swing>".
Amplitude parse_amplitude(const std::string &descriptor);
// {"kind":"power_law","p":3,"amplitude":"const:1"}, {"kind":"polynomial","coeffs":[...],
// "p":..,"c0":..} or {"kind":"zero"}. Throws InvalidConfig naming the offending field.
Nonlinearity parse_nonlinearity(const Json &j, const std::string &field);

Json to_json(const EnergyBreakdown &e);
Json to_json(const ResidualNorms &r);
Json to_json(const Decomposition &d);
Json to_json(const HypothesisEntry &h);
Json to_json(const GrowthFit &g);
Json to_json(const HypothesisReport &r);
Json to_json(const SolveReport &r);
Json to_json(const LinfReport &r);

std::string sweep_csv(const SweepReport &sweep);
std::string profile_csv(const KernelProfile &p);
KernelProfile parse_profile_csv(const std::string &text);
std::string modulus_csv(const ContinuityReport &report);
std::string range_condition_csv(const RangeCondition &rc);
// Rows t,x,value over the grid.
std::string grid_csv(const GridField &g);
// Rows j,k,lambda,class for 1 <= j <= J, -K <= k <= K.
std::string spectrum_csv(const Truncation &trunc, double b);

}  // namespace kgp

#endif  // KGP_IO_HPP
