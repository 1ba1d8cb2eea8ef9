// stac - volumetric shape-transformation tool. Enlarges selected label
// classes in image/label volume pairs by warping voxels along the signed
// distance field of those classes, with the displacement magnitude decaying
// exponentially away from the class boundary.

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "stac/deform.hpp"
#include "stac/metrics.hpp"
#include "stac/mhd_io.hpp"
#include "stac/phantom.hpp"
#include "stac/sdf.hpp"
#include "stac/verify.hpp"
#include "stac/version.hpp"
#include "stac/warp.hpp"

namespace fs = std::filesystem;
using ordered_json = nlohmann::ordered_json;

namespace {

std::vector<std::string> split(const std::string& text, char sep) {
    std::vector<std::string> out;
    std::string token;
    for (char c : text) {
        if (c == sep) {
            out.push_back(token);
            token.clear();
        } else {
            token += c;
        }
    }
    out.push_back(token);
    return out;
}

stac::GridShape parse_dims(const std::string& text) {
    const auto parts = split(text, ',');
    if (parts.size() != 3)
        throw CLI::ValidationError("--dims", "expected X,Y,Z");
    stac::GridShape s;
    try {
        s.nx = std::stoi(parts[0]);
        s.ny = std::stoi(parts[1]);
        s.nz = std::stoi(parts[2]);
    } catch (const std::exception&) {
        throw CLI::ValidationError("--dims", "components must be integers");
    }
    if (s.nx <= 0 || s.ny <= 0 || s.nz <= 0)
        throw CLI::ValidationError("--dims", "components must be positive");
    return s;
}

std::array<double, 3> parse_triple(const std::string& text, const char* flag) {
    const auto parts = split(text, ',');
    if (parts.size() != 3) throw CLI::ValidationError(flag, "expected a,b,c");
    std::array<double, 3> out{};
    try {
        for (int i = 0; i < 3; ++i) out[i] = std::stod(parts[i]);
    } catch (const std::exception&) {
        throw CLI::ValidationError(flag, "components must be numbers");
    }
    return out;
}

std::vector<std::uint8_t> parse_class_list(const std::string& text, const char* flag) {
    std::vector<std::uint8_t> out;
    for (const std::string& part : split(text, ',')) {
        try {
            const int v = std::stoi(part);
            if (v < 0 || v > 255) throw std::out_of_range("class id");
            out.push_back(static_cast<std::uint8_t>(v));
        } catch (const std::exception&) {
            throw CLI::ValidationError(flag, "expected class IDs in [0,255]: '" + part + "'");
        }
    }
    return out;
}

std::string file_hash(const fs::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) stac::fail(stac::Error::Kind::IoError, "cannot open " + path.string());
    const std::string bytes((std::istreambuf_iterator<char>(in)),
                            std::istreambuf_iterator<char>());
    return stac::fnv1a64_hex(bytes.data(), bytes.size());
}

ordered_json file_record(const fs::path& path) {
    return ordered_json{{"path", path.string()}, {"fnv1a64", file_hash(path)}};
}

void write_json(const ordered_json& j, const fs::path& path) {
    const std::string text = j.dump(2) + "\n";
    std::ofstream out(path, std::ios::trunc);
    if (!out) stac::fail(stac::Error::Kind::IoError, "cannot write " + path.string());
    out << text;
}

// --- phantom -------------------------------------------------------------

struct PhantomArgs {
    std::string preset = "sphere";
    std::string dims = "64,64,64";
    std::string spacing = "1,1,1";
    std::uint64_t seed = 0;
    std::string out_image, out_label;
    double radius = 0.0;        // sphere / multi_organ major override
    double radius_minor = 0.0;  // multi_organ minor override
    std::string semi_axes, half_extent;
    double noise = -1.0;
};

void run_phantom(const PhantomArgs& a) {
    stac::GridShape grid = parse_dims(a.dims);
    const auto sp = parse_triple(a.spacing, "--spacing");
    grid.sx = sp[0];
    grid.sy = sp[1];
    grid.sz = sp[2];

    stac::PhantomSpec spec = stac::make_preset(a.preset, grid, a.seed);
    if (a.radius > 0.0) spec.shapes[0].extent[0] = a.radius;
    if (a.radius_minor > 0.0 && spec.shapes.size() > 1)
        spec.shapes[1].extent[0] = a.radius_minor;
    if (!a.semi_axes.empty())
        spec.shapes[0].extent = parse_triple(a.semi_axes, "--semi-axes");
    if (!a.half_extent.empty())
        spec.shapes[0].extent = parse_triple(a.half_extent, "--half-extent");
    if (a.noise >= 0.0) spec.intensity.noise_amplitude = a.noise;

    const stac::Phantom ph = stac::generate(spec);
    stac::write_volume(ph.image, a.out_image);
    stac::write_volume(ph.label, a.out_label);
}

// --- sdf -----------------------------------------------------------------

struct SdfArgs {
    std::string label, classes, out;
};

void run_sdf(const SdfArgs& a) {
    const stac::LabelVolume label = stac::read_label_volume(a.label);
    const auto classes = parse_class_list(a.classes, "--classes");
    const stac::SdfVolume phi = stac::signed_distance(label, classes);
    stac::write_volume(phi.values, a.out);
}

// --- augment ---------------------------------------------------------------

struct AugmentArgs {
    std::string image, label, minority;
    double alpha = 1.0, beta = -1.0, epsilon = 1e-8;
    bool shrink = false;
    bool literal_eq4_sign = false;
    std::string sdf_in;
    std::string out_image, out_label;
};

std::vector<std::uint8_t> resolve_minority(const std::string& text,
                                           const stac::LabelVolume& label) {
    if (text.rfind("auto:", 0) == 0) {
        const stac::MinorityPolicy policy = stac::MinorityPolicy::parse(text.substr(5));
        return stac::select_minority(stac::class_histogram(label), policy);
    }
    return parse_class_list(text, "--minority");
}

void run_augment(const AugmentArgs& a) {
    const stac::ScalarVolume image = stac::read_scalar_volume(a.image);
    const stac::LabelVolume label = stac::read_label_volume(a.label);

    stac::AugmentParams params;
    params.alpha = a.alpha;
    params.beta = a.beta;
    params.epsilon = a.epsilon;
    // Both flags flip the displacement to the ascending-SDF side; --shrink
    // states the intent, --literal-eq4-sign the provenance of that sign.
    params.enlarge = !(a.shrink || a.literal_eq4_sign);
    params.validate();

    std::vector<std::uint8_t> minority;
    stac::AugmentedPair out;
    if (!a.sdf_in.empty()) {
        const stac::SdfVolume phi{stac::read_scalar_volume(a.sdf_in)};
        if (!a.minority.empty()) minority = resolve_minority(a.minority, label);
        out = stac::augment_with_sdf(image, label, phi, params);
        out.provenance.minority = minority;
        out.provenance.sdf_id = a.sdf_in;
    } else {
        if (a.minority.empty())
            throw CLI::RequiredError("--minority (required unless --sdf-in is given)");
        minority = resolve_minority(a.minority, label);
        out = stac::augment_pair(image, label, minority, params);
    }
    out.provenance.image_id = a.image;
    out.provenance.label_id = a.label;

    stac::write_volume(out.image, a.out_image);
    stac::write_volume(out.label, a.out_label);

    ordered_json sidecar;
    sidecar["tool"] = stac::kToolName;
    sidecar["version"] = stac::kVersion;
    sidecar["alpha"] = params.alpha;
    sidecar["beta"] = params.beta;
    sidecar["enlarge"] = params.enlarge;
    sidecar["epsilon"] = params.epsilon;
    sidecar["minority"] = out.provenance.minority;
    sidecar["minority_spec"] = a.minority;
    sidecar["sdf_route"] = a.sdf_in.empty() ? "label" : "external";
    ordered_json inputs;
    inputs["image"] = file_record(a.image);
    inputs["label"] = file_record(a.label);
    if (!a.sdf_in.empty()) inputs["sdf"] = file_record(a.sdf_in);
    sidecar["inputs"] = inputs;
    ordered_json outputs;
    outputs["image"] = file_record(a.out_image);
    outputs["label"] = file_record(a.out_label);
    sidecar["outputs"] = outputs;

    fs::path sidecar_path = a.out_image;
    sidecar_path.replace_extension(".provenance.json");
    write_json(sidecar, sidecar_path);
}

// --- stats -----------------------------------------------------------------

struct StatsArgs {
    std::string label, json_out, minority;
};

void run_stats(const StatsArgs& a) {
    const stac::LabelVolume label = stac::read_label_volume(a.label);
    stac::ClassStats stats = stac::class_histogram(label);
    if (!a.minority.empty()) stats.minority = resolve_minority(a.minority, label);

    ordered_json j;
    ordered_json counts, fractions;
    for (const auto& [cls, count] : stats.counts) counts[std::to_string(cls)] = count;
    for (const auto& [cls, frac] : stats.fractions) fractions[std::to_string(cls)] = frac;
    j["counts"] = counts;
    j["fractions"] = fractions;
    j["imbalance_ratio"] = stats.imbalance_ratio;
    j["minority"] = stats.minority;
    write_json(j, a.json_out);
}

// --- metrics -----------------------------------------------------------------

struct MetricsArgs {
    std::string pred, ref, classes, json_out;
};

void run_metrics(const MetricsArgs& a) {
    const stac::LabelVolume pred = stac::read_label_volume(a.pred);
    const stac::LabelVolume ref = stac::read_label_volume(a.ref);
    const auto classes = parse_class_list(a.classes, "--classes");

    ordered_json dice_j, asd_j;
    for (std::uint8_t cls : classes) {
        const std::string key = std::to_string(cls);
        dice_j[key] = stac::dice(pred, ref, cls);
        try {
            asd_j[key] = stac::average_surface_distance(pred, ref, cls);
        } catch (const stac::Error& e) {
            if (e.kind() != stac::Error::Kind::EmptySurface) throw;
            asd_j[key] = nullptr; // undefined for an empty surface
        }
    }
    ordered_json j;
    j["dice"] = dice_j;
    j["asd_mm"] = asd_j;
    write_json(j, a.json_out);
}

// --- verify ------------------------------------------------------------------

int run_verify() {
    bool all_pass = true;
    for (const stac::CheckResult& r : stac::run_verify_suite()) {
        std::printf("[%s] %s: %s\n", r.pass ? "PASS" : "FAIL", r.name.c_str(),
                    r.detail.c_str());
        all_pass = all_pass && r.pass;
    }
    std::printf("verify: %s\n", all_pass ? "all checks passed" : "FAILURES detected");
    return all_pass ? 0 : 4;
}

int exit_code_for(const stac::Error& e) {
    switch (e.kind()) {
    case stac::Error::Kind::ParseError:
    case stac::Error::Kind::SizeMismatch:
    case stac::Error::Kind::Unsupported:
    case stac::Error::Kind::IoError:
        return 2;
    default:
        return 3;
    }
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"SDF-guided shape transformation for 3D image/label volumes"};
    app.set_version_flag("--version", std::string(stac::kVersion));
    app.require_subcommand(1);

    PhantomArgs phantom_args;
    CLI::App* phantom = app.add_subcommand(
        "phantom", "Generate a synthetic image/label pair with known geometry");
    phantom->add_option("--preset", phantom_args.preset,
                        "sphere | ellipsoid | box | multi_organ");
    phantom->add_option("--dims", phantom_args.dims, "Voxel counts X,Y,Z (default 64,64,64)");
    phantom->add_option("--spacing", phantom_args.spacing, "Voxel spacing mm (default 1,1,1)");
    phantom->add_option("--seed", phantom_args.seed, "Noise seed");
    phantom->add_option("--out-image", phantom_args.out_image, "Output image (.mhd)")
        ->required();
    phantom->add_option("--out-label", phantom_args.out_label, "Output label (.mhd)")
        ->required();
    phantom->add_option("--radius", phantom_args.radius, "Sphere radius override (mm)");
    phantom->add_option("--radius-minor", phantom_args.radius_minor,
                        "multi_organ minor-sphere radius override (mm)");
    phantom->add_option("--semi-axes", phantom_args.semi_axes, "Ellipsoid semi-axes a,b,c");
    phantom->add_option("--half-extent", phantom_args.half_extent, "Box half-extents a,b,c");
    phantom->add_option("--noise", phantom_args.noise, "Noise amplitude override");

    SdfArgs sdf_args;
    CLI::App* sdf = app.add_subcommand("sdf", "Signed distance field of selected classes");
    sdf->add_option("--label", sdf_args.label, "Input label (.mhd)")->required();
    sdf->add_option("--classes", sdf_args.classes, "Class IDs, e.g. 1,3")->required();
    sdf->add_option("--out", sdf_args.out, "Output SDF (.mhd, MET_FLOAT)")->required();

    AugmentArgs augment_args;
    CLI::App* augment = app.add_subcommand(
        "augment", "Enlarge minority classes in an image/label pair");
    augment->add_option("--image", augment_args.image, "Input image (.mhd)")->required();
    augment->add_option("--label", augment_args.label, "Input label (.mhd)")->required();
    augment->add_option("--minority", augment_args.minority,
                        "auto:fraction:T | auto:bottom:K | explicit IDs like 1,3");
    augment->add_option("--alpha", augment_args.alpha, "Displacement scale >= 0 (mm)");
    augment->add_option("--beta", augment_args.beta, "Decay rate <= 0 (per mm)");
    augment->add_option("--epsilon", augment_args.epsilon, "Gradient floor");
    augment->add_flag("--shrink", augment_args.shrink,
                      "Displace content inward instead (shrinks the classes)");
    augment->add_flag("--literal-eq4-sign", augment_args.literal_eq4_sign,
                      "Sample along +W*grad(phi); equivalent to --shrink");
    augment->add_option("--sdf-in", augment_args.sdf_in,
                        "External (pseudo) SDF; skips the label-derived SDF");
    augment->add_option("--out-image", augment_args.out_image, "Output image (.mhd)")
        ->required();
    augment->add_option("--out-label", augment_args.out_label, "Output label (.mhd)")
        ->required();

    StatsArgs stats_args;
    CLI::App* stats = app.add_subcommand("stats", "Per-class voxel statistics as JSON");
    stats->add_option("--label", stats_args.label, "Input label (.mhd)")->required();
    stats->add_option("--json", stats_args.json_out, "Output JSON path")->required();
    stats->add_option("--minority", stats_args.minority,
                      "Optional minority selection to include in the report");

    MetricsArgs metrics_args;
    CLI::App* metrics =
        app.add_subcommand("metrics", "Dice and average surface distance as JSON");
    metrics->add_option("--pred", metrics_args.pred, "Predicted label (.mhd)")->required();
    metrics->add_option("--ref", metrics_args.ref, "Reference label (.mhd)")->required();
    metrics->add_option("--classes", metrics_args.classes, "Class IDs, e.g. 1,2")->required();
    metrics->add_option("--json", metrics_args.json_out, "Output JSON path")->required();

    CLI::App* verify = app.add_subcommand("verify", "Run the embedded oracle checks");

    int rc = 0;
    phantom->callback([&] { run_phantom(phantom_args); });
    sdf->callback([&] { run_sdf(sdf_args); });
    augment->callback([&] { run_augment(augment_args); });
    stats->callback([&] { run_stats(stats_args); });
    metrics->callback([&] { run_metrics(metrics_args); });
    verify->callback([&] { rc = run_verify(); });

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::CallForVersion& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return 1;
    } catch (const stac::Error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return exit_code_for(e);
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 3;
    }
    return rc;
}
