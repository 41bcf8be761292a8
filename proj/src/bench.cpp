#include "lamfast/bench.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <memory>
#include <optional>
#include <random>
#include <sstream>
#include <stdexcept>
#include <tuple>

#include <json.hpp>

#include "lamfast/fast.hpp"
#include "lamfast/voigt_free.hpp"

namespace lamfast {

namespace {

constexpr double kPi = 3.14159265358979323846;

double degreesToRadians(double deg) { return deg * kPi / 180.0; }

double medianOf(std::vector<double> values) {
    std::sort(values.begin(), values.end());
    const std::size_t n = values.size();
    return n % 2 == 1 ? values[n / 2] : 0.5 * (values[n / 2 - 1] + values[n / 2]);
}

} // namespace

std::string backendName(Backend backend) {
    switch (backend) {
    case Backend::Standard: return "standard";
    case Backend::Fast: return "fast";
    case Backend::VoigtFree: return "voigt_free";
    }
    throw std::logic_error("backendName: unknown backend");
}

Backend backendFromName(const std::string& name) {
    if (name == "standard")
        return Backend::Standard;
    if (name == "fast")
        return Backend::Fast;
    if (name == "voigt_free" || name == "voigt-free")
        return Backend::VoigtFree;
    throw std::invalid_argument("unknown backend '" + name + "'");
}

StiffnessMatrix assembleWith(Backend backend, const ProblemSetup& setup,
                             const AssemblyOptions& options, AssemblyStats* stats) {
    switch (backend) {
    case Backend::Standard: return assembleStandard(setup, options, stats);
    case Backend::Fast: return assembleFast(setup, options, stats);
    case Backend::VoigtFree: return assembleVoigtFree(setup, options, stats);
    }
    throw std::logic_error("assembleWith: unknown backend");
}

std::string layupFamilyName(LayupFamily family) {
    switch (family) {
    case LayupFamily::CrossPly: return "cross_ply_0_90";
    case LayupFamily::QuadPly: return "quad_ply_0_p45_m45_90";
    case LayupFamily::Custom: return "custom";
    }
    throw std::logic_error("layupFamilyName: unknown family");
}

LayupFamily layupFamilyFromName(const std::string& name) {
    if (name == "cross_ply_0_90" || name == "cross_ply")
        return LayupFamily::CrossPly;
    if (name == "quad_ply_0_p45_m45_90" || name == "quad_ply")
        return LayupFamily::QuadPly;
    if (name == "custom")
        return LayupFamily::Custom;
    throw std::invalid_argument("unknown layup family '" + name + "'");
}

std::vector<double> familyAngles(LayupFamily family, int m) {
    if (m < 1)
        throw std::invalid_argument("familyAngles: need at least one layer");
    std::vector<double> angles;
    angles.reserve(static_cast<std::size_t>(m));
    for (int l = 0; l < m; ++l) {
        switch (family) {
        case LayupFamily::CrossPly:
            angles.push_back(l % 2 == 0 ? 0.0 : 0.5 * kPi);
            break;
        case LayupFamily::QuadPly: {
            constexpr double cycle[4] = {0.0, 0.25 * kPi, -0.25 * kPi, 0.5 * kPi};
            angles.push_back(cycle[l % 4]);
            break;
        }
        case LayupFamily::Custom:
            throw std::invalid_argument("familyAngles: the custom family has no fixed angles");
        }
    }
    return angles;
}

OrthotropicConstants paganoConstants() {
    OrthotropicConstants c;
    c.E1 = 25.0;
    c.E2 = c.E3 = 1.0;
    c.G12 = c.G13 = 0.2;
    c.G23 = 0.5;
    c.nu12 = c.nu13 = c.nu23 = 0.25;
    return c;
}

ProblemSetup paganoSetup(const std::vector<double>& angles, int degree, int elements_x,
                         int elements_y, int thickness_elements, const PlateDimensions& plate) {
    std::vector<LayerSpec> layers;
    layers.reserve(angles.size());
    for (double a : angles)
        layers.push_back({paganoConstants(), a});
    return ProblemSetup{
        TensorProductSpace(KnotVector::uniform(degree, elements_x),
                           KnotVector::uniform(degree, elements_y),
                           KnotVector::uniform(degree, thickness_elements)),
        ExtrudedGeometry(std::make_shared<PlanarRectangle>(plate.lx, plate.ly),
                         Eigen::Vector3d(0, 0, plate.thickness)),
        Layup::equalLayers(layers)};
}

ProblemSetup paganoSetup(int m, LayupFamily family, int degree, int elements) {
    return paganoSetup(familyAngles(family, m), degree, elements, elements);
}

void BenchConfig::validate() const {
    if (degrees.empty() || inplane_elements.empty() || layer_counts.empty() || backends.empty())
        throw std::invalid_argument("bench config: empty sweep list");
    if (repetitions < 1)
        throw std::invalid_argument("bench config: repetitions must be at least 1");
    for (int p : degrees)
        if (p < 1)
            throw std::invalid_argument("bench config: degree must be at least 1");
    for (int e : inplane_elements)
        if (e < 1)
            throw std::invalid_argument("bench config: element count must be at least 1");
    for (int m : layer_counts)
        if (m < 1)
            throw std::invalid_argument("bench config: layer count must be at least 1");
}

BenchReport runBench(const BenchConfig& config) {
    config.validate();

    // Custom-family angle sets: one per layer count, so every (p, elements)
    // cell of the same m measures the same laminate.
    std::vector<std::vector<double>> custom_angles;
    if (config.family == LayupFamily::Custom) {
        std::mt19937 rng(config.seed);
        std::uniform_real_distribution<double> dist(-0.5 * kPi, 0.5 * kPi);
        for (int m : config.layer_counts) {
            std::vector<double> angles;
            for (int l = 0; l < m; ++l)
                angles.push_back(dist(rng));
            custom_angles.push_back(std::move(angles));
        }
    }

    // The standard backend goes first within a cell so every other backend
    // can report its difference against it.
    std::vector<Backend> ordered = config.backends;
    std::stable_sort(ordered.begin(), ordered.end(), [](Backend a, Backend b) {
        return (a == Backend::Standard) > (b == Backend::Standard);
    });

    BenchReport report;
    report.threads = config.threads;
    for (int p : config.degrees) {
        for (int elements : config.inplane_elements) {
            for (std::size_t mi = 0; mi < config.layer_counts.size(); ++mi) {
                const int m = config.layer_counts[mi];
                const std::string cell = "p=" + std::to_string(p) +
                                         " elements=" + std::to_string(elements) +
                                         " m=" + std::to_string(m);

                std::optional<ProblemSetup> setup;
                try {
                    const std::vector<double> angles = config.family == LayupFamily::Custom
                                                           ? custom_angles[mi]
                                                           : familyAngles(config.family, m);
                    setup.emplace(paganoSetup(angles, p, elements, elements, 1, config.plate));
                } catch (const std::exception& err) {
                    report.failures.push_back(cell + ": " + err.what());
                    continue;
                }

                AssemblyOptions options;
                options.threads = config.threads;
                std::optional<StiffnessMatrix> standard_matrix;

                for (Backend backend : ordered) {
                    try {
                        AssemblyStats stats;
                        StiffnessMatrix matrix = assembleWith(backend, *setup, options, &stats);

                        std::vector<double> times;
                        times.reserve(static_cast<std::size_t>(config.repetitions));
                        for (int rep = 0; rep < config.repetitions; ++rep) {
                            const auto t0 = std::chrono::steady_clock::now();
                            matrix = assembleWith(backend, *setup, options);
                            const auto t1 = std::chrono::steady_clock::now();
                            times.push_back(std::chrono::duration<double>(t1 - t0).count());
                        }

                        BenchRecord record;
                        record.backend = backend;
                        record.p = p;
                        record.elements = elements;
                        record.m = m;
                        record.m_bar = setup->layup.numDistinctConfigs();
                        record.time_s = medianOf(std::move(times));
                        record.nnz = matrix.nnz();
                        record.qpoints = stats.qpoint_visits;
                        if (backend == Backend::Standard) {
                            record.rel_diff = 0.0;
                            standard_matrix = std::move(matrix);
                        } else if (standard_matrix) {
                            record.rel_diff = frobeniusRelDiff(matrix, *standard_matrix);
                        }
                        report.records.push_back(record);
                    } catch (const std::exception& err) {
                        report.failures.push_back(cell + " backend=" + backendName(backend) +
                                                  ": " + err.what());
                    }
                }
            }
        }
    }

    std::stable_sort(report.records.begin(), report.records.end(),
                     [](const BenchRecord& a, const BenchRecord& b) {
                         return std::make_tuple(backendName(a.backend), a.p, a.elements, a.m) <
                                std::make_tuple(backendName(b.backend), b.p, b.elements, b.m);
                     });
    return report;
}

void emitCsv(const BenchReport& report, std::ostream& out) {
    out << "backend,p,elements,m,m_bar,time_s,nnz,rel_diff,qpoints\n";
    out.precision(17);
    for (const BenchRecord& r : report.records) {
        out << backendName(r.backend) << ',' << r.p << ',' << r.elements << ',' << r.m << ','
            << r.m_bar << ',' << r.time_s << ',' << r.nnz << ',';
        if (r.rel_diff)
            out << *r.rel_diff;
        out << ',' << r.qpoints << '\n';
    }
}

void emitJson(const BenchReport& report, std::ostream& out) {
    nlohmann::json doc;
    doc["records"] = nlohmann::json::array();
    for (const BenchRecord& r : report.records) {
        nlohmann::json rec;
        rec["backend"] = backendName(r.backend);
        rec["p"] = r.p;
        rec["elements"] = r.elements;
        rec["m"] = r.m;
        rec["m_bar"] = r.m_bar;
        rec["time_s"] = r.time_s;
        rec["nnz"] = r.nnz;
        rec["rel_diff"] = r.rel_diff ? nlohmann::json(*r.rel_diff) : nlohmann::json(nullptr);
        rec["qpoints"] = r.qpoints;
        doc["records"].push_back(std::move(rec));
    }
    doc["failures"] = report.failures;
    doc["threads"] = report.threads;
    out << doc.dump(2) << '\n';
}

BenchReport parseJsonReport(std::istream& in) {
    const nlohmann::json doc = nlohmann::json::parse(in);
    BenchReport report;
    for (const nlohmann::json& rec : doc.at("records")) {
        BenchRecord r;
        r.backend = backendFromName(rec.at("backend").get<std::string>());
        r.p = rec.at("p").get<int>();
        r.elements = rec.at("elements").get<int>();
        r.m = rec.at("m").get<int>();
        r.m_bar = rec.at("m_bar").get<int>();
        r.time_s = rec.at("time_s").get<double>();
        r.nnz = rec.at("nnz").get<std::int64_t>();
        if (!rec.at("rel_diff").is_null())
            r.rel_diff = rec.at("rel_diff").get<double>();
        r.qpoints = rec.at("qpoints").get<std::int64_t>();
        report.records.push_back(r);
    }
    for (const nlohmann::json& f : doc.value("failures", nlohmann::json::array()))
        report.failures.push_back(f.get<std::string>());
    report.threads = doc.value("threads", 1);
    return report;
}

ProblemConfig parseProblemConfig(std::istream& in) {
    const nlohmann::json doc = nlohmann::json::parse(in);
    ProblemConfig config;

    const nlohmann::json& mat = doc.at("material");
    config.material.E1 = mat.at("E1").get<double>();
    config.material.E2 = mat.at("E2").get<double>();
    config.material.E3 = mat.at("E3").get<double>();
    config.material.G12 = mat.at("G12").get<double>();
    config.material.G13 = mat.at("G13").get<double>();
    config.material.G23 = mat.at("G23").get<double>();
    config.material.nu12 = mat.at("nu12").get<double>();
    config.material.nu13 = mat.at("nu13").get<double>();
    config.material.nu23 = mat.at("nu23").get<double>();

    const nlohmann::json& layup = doc.at("layup");
    if (layup.contains("angles")) {
        for (const nlohmann::json& a : layup.at("angles"))
            config.angles.push_back(degreesToRadians(a.get<double>()));
    } else {
        const LayupFamily family = layupFamilyFromName(layup.at("family").get<std::string>());
        config.angles = familyAngles(family, layup.at("layers").get<int>());
    }
    if (layup.contains("interfaces"))
        for (const nlohmann::json& t : layup.at("interfaces"))
            config.interfaces.push_back(t.get<double>());

    const nlohmann::json& disc = doc.at("discretization");
    config.degree = disc.at("degree").get<int>();
    const nlohmann::json& elements = disc.at("elements");
    if (!elements.is_array() || elements.size() != 2)
        throw std::invalid_argument("config: discretization.elements must be [nx, ny]");
    config.elements_x = elements[0].get<int>();
    config.elements_y = elements[1].get<int>();
    config.thickness_elements = disc.value("thickness_elements", 1);

    if (doc.contains("geometry")) {
        const nlohmann::json& geometry = doc.at("geometry");
        config.lx = geometry.value("Lx", 1.0);
        config.ly = geometry.value("Ly", 1.0);
        if (geometry.contains("a")) {
            const nlohmann::json& a = geometry.at("a");
            if (!a.is_array() || a.size() != 3)
                throw std::invalid_argument("config: geometry.a must be [ax, ay, az]");
            config.extrusion =
                Eigen::Vector3d(a[0].get<double>(), a[1].get<double>(), a[2].get<double>());
        }
    }
    return config;
}

ProblemSetup buildSetup(const ProblemConfig& config) {
    std::vector<LayerSpec> layers;
    for (double angle : config.angles)
        layers.push_back({config.material, angle});
    Layup layup = config.interfaces.empty() ? Layup::equalLayers(layers)
                                            : Layup(config.interfaces, layers);
    return ProblemSetup{TensorProductSpace(KnotVector::uniform(config.degree, config.elements_x),
                                           KnotVector::uniform(config.degree, config.elements_y),
                                           KnotVector::uniform(config.degree,
                                                               config.thickness_elements)),
                        ExtrudedGeometry(std::make_shared<PlanarRectangle>(config.lx, config.ly),
                                         config.extrusion),
                        std::move(layup)};
}

BenchConfig parseBenchConfig(std::istream& in) {
    const nlohmann::json doc = nlohmann::json::parse(in);
    BenchConfig config;
    for (const nlohmann::json& p : doc.at("degrees"))
        config.degrees.push_back(p.get<int>());
    for (const nlohmann::json& e : doc.at("elements"))
        config.inplane_elements.push_back(e.get<int>());
    for (const nlohmann::json& m : doc.at("layers"))
        config.layer_counts.push_back(m.get<int>());
    config.family = layupFamilyFromName(doc.value("family", std::string("cross_ply_0_90")));
    if (doc.contains("backends")) {
        config.backends.clear();
        for (const nlohmann::json& b : doc.at("backends"))
            config.backends.push_back(backendFromName(b.get<std::string>()));
    }
    config.repetitions = doc.value("repetitions", 3);
    if (doc.contains("plate")) {
        const nlohmann::json& plate = doc.at("plate");
        config.plate.lx = plate.value("Lx", 1.0);
        config.plate.ly = plate.value("Ly", 1.0);
        config.plate.thickness = plate.value("thickness", 0.1);
    }
    config.validate();
    return config;
}

} // namespace lamfast
