#pragma once

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "lamfast/assembly.hpp"

namespace lamfast {

enum class Backend { Standard, Fast, VoigtFree };

std::string backendName(Backend backend);
Backend backendFromName(const std::string& name);

/// Dispatches to the assembler implementing the requested backend.
StiffnessMatrix assembleWith(Backend backend, const ProblemSetup& setup,
                             const AssemblyOptions& options = {}, AssemblyStats* stats = nullptr);

enum class LayupFamily { CrossPly, QuadPly, Custom };

std::string layupFamilyName(LayupFamily family);
LayupFamily layupFamilyFromName(const std::string& name);

/// Stacking angles of the named families: cross-ply alternates {0, 90} deg,
/// quad-ply cycles {0, 45, -45, 90} deg.  Throws for the custom family,
/// whose angles come from elsewhere.
std::vector<double> familyAngles(LayupFamily family, int m);

/// The plate problem benchmarked throughout: Pagano's material
/// (E1 = 25, E2 = E3 = 1, G12 = G13 = 0.2, G23 = 0.5, nu = 0.25),
/// equal-thickness layers with the given angles, an Lx x Ly plate extruded
/// along (0, 0, thickness), and uniform maximum-continuity knot vectors.
struct PlateDimensions {
    double lx = 1.0, ly = 1.0, thickness = 0.1;
};

OrthotropicConstants paganoConstants();

ProblemSetup paganoSetup(const std::vector<double>& angles, int degree, int elements_x,
                         int elements_y, int thickness_elements = 1,
                         const PlateDimensions& plate = {});

ProblemSetup paganoSetup(int m, LayupFamily family, int degree, int elements);

/// One sweep: the cross product of degrees x element counts x layer counts,
/// each cell assembled with every requested backend.
struct BenchConfig {
    std::vector<int> degrees;
    std::vector<int> inplane_elements; ///< per direction
    std::vector<int> layer_counts;
    LayupFamily family = LayupFamily::CrossPly;
    std::vector<Backend> backends = {Backend::Standard, Backend::Fast};
    PlateDimensions plate;
    int repetitions = 3;
    int threads = 1;
    /// Seeds the angle draw for the custom family (one fresh set per layer
    /// count); ignored for the named families.
    unsigned seed = 1u;

    /// Throws std::invalid_argument when a list is empty or repetitions < 1.
    void validate() const;
};

struct BenchRecord {
    Backend backend = Backend::Standard;
    int p = 0;
    int elements = 0; ///< per direction
    int m = 0;
    int m_bar = 0;
    double time_s = 0.0;
    std::int64_t nnz = 0;
    /// Relative Frobenius difference against the standard backend of the
    /// same cell; empty when the standard backend was not run there.
    std::optional<double> rel_diff;
    std::int64_t qpoints = 0;

    bool operator==(const BenchRecord&) const = default;
};

struct BenchReport {
    std::vector<BenchRecord> records; ///< sorted by (backend, p, elements, m)
    std::vector<std::string> failures;
    /// Threads used per assembly; carried into the JSON report (the CSV
    /// column set is fixed and does not include it).
    int threads = 1;
};

/// Runs the grid sequentially (no timing interference between cells).  Each
/// cell does one warm-up assembly per backend, then takes the median of
/// `repetitions` timed runs.  Timed work covers operator computation,
/// combination and finalize; space and geometry construction happen outside
/// the clock.  A failing cell is recorded and the run continues.
BenchReport runBench(const BenchConfig& config);

enum class ReportFormat { Csv, Json };

/// Header exactly "backend,p,elements,m,m_bar,time_s,nnz,rel_diff,qpoints";
/// one row per record, empty rel_diff cell when unavailable.
void emitCsv(const BenchReport& report, std::ostream& out);

void emitJson(const BenchReport& report, std::ostream& out);

/// Parses emitJson output back; used to guarantee the report round-trips.
BenchReport parseJsonReport(std::istream& in);

/// Single-problem description, read from a JSON config file.
struct ProblemConfig {
    OrthotropicConstants material;
    std::vector<double> angles;
    std::vector<double> interfaces; ///< empty = equal thickness
    int degree = 1;
    int elements_x = 1, elements_y = 1;
    int thickness_elements = 1;
    double lx = 1.0, ly = 1.0;
    Eigen::Vector3d extrusion = Eigen::Vector3d(0, 0, 0.1);
};

/// Reads {material, layup, discretization, geometry} from JSON text.  The
/// layup block gives either explicit "angles" (degrees) or a named "family"
/// with a "layers" count; "interfaces" is optional.
ProblemConfig parseProblemConfig(std::istream& in);

ProblemSetup buildSetup(const ProblemConfig& config);

/// Reads a sweep description from JSON text.
BenchConfig parseBenchConfig(std::istream& in);

} // namespace lamfast
