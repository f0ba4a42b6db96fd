#pragma once

#include "specmat/mat2.hpp"

#include <numbers>
#include <optional>
#include <string>
#include <utility>
#include <vector>

namespace specmat {

enum class Family { A0, A1, A2, A3, A4 };

const char* to_string(Family f);

// A0 = diag(a, d), A1 = (a, 1; 1, d), A2 = (a, 0; 1, d), A3 = (a, 1; 0, d),
// A4 = (a, -1; 1, d).
CMatrix2 family_matrix(Family f, double a, double d);

struct CanonicalForm {
    Family family = Family::A0;
    double alpha = 1.0;
    double a = 0.0, d = 0.0;
    double r = 1.0;   // B = diag(1, 1/r)
    int sign = 1;

    CMatrix2 B() const { return CMatrix2::diag(1.0, 1.0 / r); }
    CMatrix2 scaled() const;       // sign * alpha * A_family(a, d)
    CMatrix2 reconstruct() const;  // B scaled() B^-1
};

CanonicalForm reduce_real(const CMatrix2& A);

enum class RegionTag { R1, R2, R3, R4, R5, R6, Boundary };

const char* to_string(RegionTag t);

struct Region {
    RegionTag tag = RegionTag::R5;
    std::string detail;
    std::vector<RegionTag> neighbors;  // for Boundary: the regimes on either side
    bool on_real_curve = false;        // a^2 - a d - 1 = 0 inside R5
};

inline constexpr double kBoundaryTol = 1e-9;

Region classify_region(double a, double d);

std::pair<cplx, cplx> a4_eigs(double a, double d);

enum class LocusKind {
    WholePlane,
    RealLine,
    NonnegativeHalfLine,
    NonpositiveHalfLine,
    Lattice,
    Sector,
    DoubleSector,
    ParabolicBand,
    Singleton0,
    RealWithFormula,
    InfiniteFinitelyManyReal
};

const char* to_string(LocusKind k);

struct ResolventBound {
    std::vector<Sector> excluded;  // ||(AD - z)^-1|| <= k/|z| outside these (widened by any eps)
    std::string statement;
};

struct SpectralPrediction {
    LocusKind locus = LocusKind::WholePlane;
    // Lattice / RealWithFormula: {g pi^2 k^2 : k >= 0} for each generator g
    std::vector<double> generators;
    std::vector<double> values;  // materialized, |v| <= lambda_max
    std::optional<Sector> sector;  // Sector / DoubleSector loci, or an extra intersection
    int band_direction = 0;        // ParabolicBand: +1 opens toward +inf, -1 toward -inf
    std::optional<double> band_height;
    std::optional<ResolventBound> resolvent_bound;
    std::vector<std::string> theorems;
    std::vector<SpectralPrediction> alternatives;  // Boundary points
    double scale = 1.0;            // loci refer to sign*alpha*A_j; already applied
    std::optional<CanonicalForm> canonical;
    std::optional<Region> region;

    double distance(cplx z) const;
    bool contains(cplx z, double tol) const { return distance(z) <= tol; }
};

inline constexpr double kDefaultLambdaMax = 400.0 * std::numbers::pi * std::numbers::pi;

SpectralPrediction predict(const CMatrix2& A, double lambda_max = kDefaultLambdaMax);

// Locus for (sign*alpha) * A4(a, d) without the reduction step.
SpectralPrediction predict_a4(double a, double d, double lambda_max = kDefaultLambdaMax);

struct PerturbationCoeffs {
    cplx mu1;
    std::optional<cplx> mu2;
};

PerturbationCoeffs perturbation_coeffs(const CMatrix2& A);

// sum_{m>=1} (2m-1)^-4, truncated once the tail bound drops below 1e-14
double odd_inverse_fourth_sum();

enum class CertificateKind { DiagonalSymmetrizable, SectorBound, NearReal };

const char* to_string(CertificateKind k);

struct Certificate {
    CertificateKind kind;
    CMatrix2 B{};
    double r = 1.0;
    std::optional<Sector> sector;
    double omega = 0.0;
    std::string conclusion;
};

std::vector<Certificate> similarity_certificates(const CMatrix2& A);

} // namespace specmat
