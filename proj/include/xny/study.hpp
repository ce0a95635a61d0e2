#pragma once
// Configurable verification studies (patch tests, convergence series,
// singular benchmarks) producing (n_dof, error) tables; shared by the CLI
// tool and the acceptance tests.

#include <map>

#include "xny/verify.hpp"

namespace xny {

struct ConfigError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

/// Shape-function pairing "la-la", "la-le", "le-la" or "le-le"
/// (x-region family first).
std::pair<FamilyKind, FamilyKind> parse_pairing(const std::string& s);
NodeDistribution parse_dist(const std::string& s);

struct StudyConfig {
    std::string kind; ///< patch-linear, patch-quadratic, patch-cubic,
                      ///< patch-highorder, conv-poly, conv-hole,
                      ///< singular-cantilever, singular-L, basis-dump
    std::string pairing = "la-le";
    std::string dist = "gll";
    std::vector<int> p_list = {2};     ///< p_x = p_y sweeps
    int p_x = 8;                       ///< conv studies
    std::vector<int> p_y_list = {1};   ///< conv studies
    std::vector<int> levels = {0};     ///< uniform pre-refinements
    int n_y = 2;
    int n_s = 1;
    // patch-linear combination sweep:
    std::vector<std::string> pairings = {"la-la", "la-le", "le-la", "le-le"};
    std::vector<std::string> dists = {"gll", "glc"};
    std::vector<int> n_y_list = {1, 2};
    std::vector<int> n_s_list = {1, 2};
    std::string mode = "stratified"; ///< "stratified" or "all"
    std::string refinement = "local"; ///< singular: "local" or "uniform"
    double E = 70e9;
    double nu = 0.3;
    int jobs = 1;
    int quad_boost = 0; ///< extra Gauss points (--exhaustive)
};

struct StudyRow {
    int n_dof = 0;
    double error = 0.0;
    int p_x = 0, p_y = 0, level = 0;
};

struct StudyResult {
    std::vector<StudyRow> rows;
    std::map<std::string, double> stats; ///< fitted slopes, U_ref, ...
    double seconds = 0.0;
};

StudyResult run_study(const StudyConfig& cfg);

/// Space over mesh for a pairing/dist at orders (p_x, p_y).
FeSpace make_space(const Mesh& mesh, const std::string& pairing,
                   const std::string& dist, int p_x, int p_y);

/// Constant uni-axial / shear exact fields for the linear patch test.
Field2D constant_stress_field(int state, double E, double nu);

} // namespace xny
