#pragma once

#include "geodesic.hpp"
#include "kahler.hpp"
#include "report.hpp"

#include <random>

namespace grs {

struct RunOptions {
    int points = 50;
    unsigned long long seed = 0;
    double tol = 1e-9;
    int kind = 0; // 0 = all four
    int geodesic_count = 10;
    int geodesic_steps = 1000;
    double geodesic_step = 1e-3;
    double geodesic_tol = 1e-8;
};

// Uniform points from the space's [lo, hi]^N box, skipping points where the
// exclude expression is <= 0.  Deterministic for a fixed seed.
std::vector<Point> sample_points(const Space& s, int count, unsigned long long seed);
std::vector<Point> sample_points_pair(const MappingPair& pair, int count, unsigned long long seed);

CheckReport run_check_space(const std::string& text, const std::string& path,
                            const RunOptions& opt);
CheckReport run_check_kahler(const std::string& text, const std::string& path,
                             const RunOptions& opt);
CheckReport run_check_mapping(const std::string& text, const std::string& path,
                              const RunOptions& opt);
CheckReport run_geodesic_test(const std::string& text, const std::string& path,
                              const RunOptions& opt);
// Validates a [source]+[mapping] file and emits the full pair file with the
// target in deformed mode.
std::string build_pair_text(const std::string& text);

} // namespace grs
