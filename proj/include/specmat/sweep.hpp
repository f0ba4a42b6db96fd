#pragma once

#include "specmat/canonical.hpp"
#include "specmat/exec.hpp"
#include "specmat/spectrum.hpp"

#include <cstdint>
#include <string>
#include <utility>
#include <vector>

namespace specmat {

enum class SweepMethod { Secular, Chebyshev, Oracle };
enum class PathKind { Segment, Lambda, AlphaList };

const char* to_string(SweepMethod m);
SweepMethod parse_sweep_method(const std::string& s);

// All paths live in the (a, d) plane of A4 = (a, -1; 1, d).
struct SweepSpec {
    PathKind path = PathKind::Segment;
    int steps = 2;
    // Segment
    double a0 = 0.0, d0 = 0.0, a1 = 0.0, d1 = 0.0;
    // Lambda: a from a0 to a1 on the sign-curve of alpha = p/q
    int p = 2, q = 1, sign = 1;
    // AlphaList: fixed a = a0, one step per alpha, sign-curve
    std::vector<std::pair<int, int>> alphas;

    SweepMethod method = SweepMethod::Secular;
    int count = 16;
    double tol = 1e-10;
    std::uint64_t seed = 0x5eed;
    bool verify = false;
    int oracle_n = 200;
    Exec exec = Exec::Parallel;
};

struct TrackedEigenvalue {
    Eigenvalue ev;
    int track = -1;
};

struct SweepRecord {
    int step = 0;
    double a = 0.0, d = 0.0;
    int p = 0, q = 0;  // set on Lambda / AlphaList paths
    RegionTag region = RegionTag::R5;
    bool whole_plane = false;
    std::vector<TrackedEigenvalue> eigenvalues;
    double seconds = 0.0;
};

// first `count` eigenvalues counting algebraic multiplicity
Spectrum truncate_count(const Spectrum& sp, int count);

std::vector<SweepRecord> run_sweep(const SweepSpec& spec);

// Greedy nearest-neighbour matching in the lambda^2 plane; matches farther
// than 5x the median displacement start a new track.
void assign_tracks(std::vector<SweepRecord>& recs);

struct NegativeRow {
    double a, d;
    double t;         // zero of EV(i t), t > 0
    double lambda2;   // -t^2
    RegionTag region;
};

NegativeRow negative_eigenvalue(double a, double d, double t_max = 400.0);
std::vector<NegativeRow> track_negative_eigenvalue(double a, double d_lo, double d_hi, int steps,
                                                   Exec exec = Exec::Parallel);

std::string to_csv(const std::vector<SweepRecord>& recs);
std::string to_json(const std::vector<SweepRecord>& recs);
std::vector<SweepRecord> records_from_json(const std::string& text);
std::string to_svg(const std::vector<SweepRecord>& recs);
std::string negative_to_csv(const std::vector<NegativeRow>& rows);

// format is csv, json or svg
void emit(const std::vector<SweepRecord>& recs, const std::string& format, const std::string& path);
void write_file(const std::string& path, const std::string& text);

} // namespace specmat
