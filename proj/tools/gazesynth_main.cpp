#include "gazesynth/error.hpp"
#include "gazesynth/facemodel.hpp"
#include "gazesynth/manifest.hpp"
#include "gazesynth/run_config.hpp"
#include "gazesynth/sampler.hpp"
#include "gazesynth/synthesize.hpp"
#include "gazesynth/synthetic.hpp"

#include "CLI11.hpp"

#include <cstdio>
#include <fstream>
#include <iostream>

namespace {

using namespace gazesynth;

constexpr int exit_ok = 0;
constexpr int exit_failure = 1;
constexpr int exit_usage = 2;

int cmd_validate(const std::filesystem::path& manifest)
{
    const ManifestReport report = validate_manifest(manifest);
    std::cout << format_report(report);
    return report.all_ok() ? exit_ok : exit_failure;
}

int cmd_synthesize(const RunConfig& run)
{
    const SynthesisConfig config = run.to_synthesis_config();
    std::filesystem::create_directories(run.output);
    {
        std::ofstream echo(run.output / "run_config.json");
        echo << run.to_json().dump(2) << '\n';
    }
    const SynthesisSummary summary = synthesize(run.manifest, config, run.output);
    std::printf("sources %zu, failed %zu, outputs %zu, wall time %.2fs\n", summary.sources,
                summary.failed_sources, summary.outputs, summary.wall_seconds);
    if (summary.aborted) {
        std::fprintf(stderr, "aborting: %zu of %zu sources failed (limit %.0f%%)\n",
                     summary.failed_sources, summary.sources, 100.0 * run.max_failure_fraction);
        return exit_failure;
    }
    return exit_ok;
}

int cmd_sample_poses(const RunConfig& run, const std::string& source_id)
{
    PoseSamplerConfig sampler;
    sampler.mode = run.sampler == "targets" ? SamplerMode::TargetList : SamplerMode::Gaussian;
    sampler.sigma_deg = run.sigma_deg;
    sampler.poses_per_source = run.poses_per_source;
    sampler.rejection_norm_deg = run.rejection_norm_deg;
    sampler.seed = derive_seed(run.seed, "poses:" + source_id);
    std::vector<SampledPose> targets;
    if (sampler.mode == SamplerMode::TargetList) {
        targets = read_target_poses(run.target_poses);
    }
    for (const auto& p : sample_poses(sampler, targets)) {
        std::printf("%.6f %.6f\n", p.pitch_deg, p.yaw_deg);
    }
    return exit_ok;
}

int cmd_gen_synthetic(const std::filesystem::path& out, int count, const SyntheticFaceParams& params)
{
    if (count < 1) {
        throw Error(ErrorCode::Config, "--count must be at least 1");
    }
    params.validate();
    const auto reference = ReferenceFaceModel::load(shipped_reference_model_path());
    const auto manifest = write_synthetic_dataset(out, count, params, reference);
    std::cout << "wrote " << count << " synthetic faces, manifest " << manifest.string() << '\n';
    return exit_ok;
}

void add_sampler_options(CLI::App& cmd, RunConfig& run)
{
    cmd.add_option("--sampler", run.sampler, "gaussian or targets")
        ->check(CLI::IsMember({"gaussian", "targets"}));
    cmd.add_option("--target-poses", run.target_poses, "pose list, one 'pitch yaw' pair per line");
    cmd.add_option("--sigma", run.sigma_deg, "gaussian sigma (degrees)");
    cmd.add_option("--poses", run.poses_per_source, "poses per source");
    cmd.add_option("--rejection-norm", run.rejection_norm_deg, "max pitch-yaw norm (degrees)");
}

} // namespace

int main(int argc, char** argv)
{
    CLI::App app{"Gaze dataset synthesis from reconstructed face meshes"};
    app.set_config("--config", "", "TOML-style config file; command-line flags take precedence");
    app.require_subcommand(1);
    app.fallthrough();

    RunConfig run;
    app.add_option("--seed", run.seed, "global seed");
    app.add_option("--workers", run.workers, "worker threads")->check(CLI::PositiveNumber);

    std::filesystem::path validate_path;
    auto* validate = app.add_subcommand("validate", "check a source manifest");
    validate->add_option("manifest,--manifest", validate_path, "manifest (JSON lines)")->required();

    auto* synth = app.add_subcommand("synthesize", "render a gaze dataset");
    synth->add_option("--manifest", run.manifest, "manifest (JSON lines)")->required();
    synth->add_option("--out", run.output, "output directory")->required();
    add_sampler_options(*synth, run);
    synth->add_option("--scene-dir", run.scene_dir, "directory of scene background images");
    synth->add_option("--ratio-black", run.ratio_black);
    synth->add_option("--ratio-color", run.ratio_color);
    synth->add_option("--ratio-scene", run.ratio_scene);
    synth->add_option("--weak-fraction", run.weak_fraction, "share of weak-light samples");
    synth->add_option("--weak-min", run.weak_min, "weak-light ambient lower bound");
    synth->add_option("--weak-max", run.weak_max, "weak-light ambient upper bound");
    synth->add_option("--blur-sigma", run.blur_sigma, "scene blur sigma (pixels)");
    synth->add_option("--focal", run.focal_px, "virtual camera focal length at render size");
    synth->add_option("--distance", run.distance_mm, "face-center distance (mm)");
    synth->add_option("--render-size", run.render_size, "render resolution (outputs are half)");
    synth->add_option("--max-failure-fraction", run.max_failure_fraction);
    synth->add_option("--reference-model", run.reference_model, "68-point reference model file");

    std::string source_id = "sample";
    auto* sample = app.add_subcommand("sample-poses", "print the poses drawn for one source");
    add_sampler_options(*sample, run);
    sample->add_option("--source-id", source_id, "source id the seed is derived from");

    std::filesystem::path gen_out;
    int gen_count = 2;
    SyntheticFaceParams params;
    auto* gen = app.add_subcommand("gen-synthetic", "write synthetic test faces and a manifest");
    gen->add_option("--out", gen_out, "output directory")->required();
    gen->add_option("--count", gen_count, "number of faces");
    gen->add_option("--interocular", params.interocular_mm, "eye-center distance (mm)");
    gen->add_option("--checker-period", params.checker_period_mm, "checkerboard period (mm)");

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return exit_usage;
    }

    try {
        if (*validate) {
            try {
                return cmd_validate(validate_path);
            } catch (const Error& e) {
                if (e.code() != ErrorCode::Io) {
                    throw;
                }
                std::cerr << "error: " << e.what() << '\n';
                return exit_usage;
            }
        }
        if (*synth) {
            return cmd_synthesize(run);
        }
        if (*sample) {
            if (run.sampler == "gaussian" && !run.target_poses.empty()) {
                throw Error(ErrorCode::Config, "a target pose list conflicts with gaussian sampling");
            }
            return cmd_sample_poses(run, source_id);
        }
        params.seed = run.seed;
        return cmd_gen_synthetic(gen_out, gen_count, params);
    } catch (const Error& e) {
        std::cerr << "error: " << e.what() << '\n';
        const bool usage = e.code() == ErrorCode::Config || e.code() == ErrorCode::Parse;
        return usage ? exit_usage : exit_failure;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return exit_failure;
    }
}
