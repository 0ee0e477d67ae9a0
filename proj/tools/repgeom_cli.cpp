#include "repgeom/repgeom.h"

#include <CLI11.hpp>

#include <cstdio>
#include <map>
#include <string>
#include <vector>

namespace {

constexpr int kUsageError = 2;

int usage_error(const std::string& message) {
  std::fprintf(stderr, "repgeom: usage error: %s\nRun with --help for usage.\n", message.c_str());
  return kUsageError;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Geometry of neural-network representation paths"};
  app.set_version_flag("--version", std::string(rg_version()));
  app.require_subcommand(1);
  app.fallthrough();

  const std::map<std::string, rg_metric_kind> metrics{
      {"angular-cka", RG_METRIC_ANGULAR_CKA},     {"angular-shape", RG_METRIC_ANGULAR_SHAPE},
      {"euclidean-shape", RG_METRIC_EUCLIDEAN_SHAPE}, {"air-gram", RG_METRIC_AIR_GRAM},
      {"air-cov", RG_METRIC_AIR_COVARIANCE}};
  const std::map<std::string, rg_kernel_kind> kernels{{"linear", RG_KERNEL_LINEAR},
                                                      {"se", RG_KERNEL_SQUARED_EXPONENTIAL}};
  const std::map<std::string, rg_format> formats{
      {"auto", RG_FORMAT_AUTO}, {"npy", RG_FORMAT_NPY}, {"csv", RG_FORMAT_CSV}};

  rg_run_options opts;
  rg_run_options_default(&opts);

  rg_metric_kind metric = RG_METRIC_ANGULAR_CKA;
  rg_kernel_kind kernel = RG_KERNEL_LINEAR;
  rg_format format = RG_FORMAT_AUTO;
  double tau = 0.0;
  int p = opts.metric.p;
  double alpha = opts.metric.alpha;
  double epsilon = opts.metric.epsilon;
  std::size_t subsample = 0;
  std::uint64_t seed = 0;
  int folds = opts.folds;
  int geodesic_samples = opts.geodesic_samples;
  int mds_dim = opts.mds_dim;
  std::string out;
  bool no_target = false;
  bool svg = false;
  bool depth_normalize = true;

  app.add_option("--metric", metric, "angular-cka, angular-shape, euclidean-shape, air-gram or air-cov")
      ->transform(CLI::CheckedTransformer(metrics, CLI::ignore_case));
  auto* kernel_opt = app.add_option("--kernel", kernel, "linear or se (squared exponential)")
                         ->transform(CLI::CheckedTransformer(kernels, CLI::ignore_case));
  auto* tau_opt = app.add_option("--tau", tau, "squared-exponential length scale (default: median heuristic)")
                      ->check(CLI::PositiveNumber);
  auto* p_opt = app.add_option("--p", p, "target dimension for shape and covariance embeddings")
                    ->check(CLI::PositiveNumber);
  auto* alpha_opt = app.add_option("--alpha", alpha, "partial whitening for shape metrics, in [0, 1]")
                        ->check(CLI::Range(0.0, 1.0));
  auto* eps_opt = app.add_option("--epsilon", epsilon, "ridge for AIR embeddings")
                      ->check(CLI::PositiveNumber);
  app.add_option("--subsample", subsample, "stimuli per run (default: min(1000, m))");
  app.add_option("--seed", seed, "seed for subsampling and MDS");
  auto* folds_opt = app.add_option("--folds", folds, "cross-validation folds")->check(CLI::Range(2, 100000));
  app.add_option("--out", out, "output directory")->required();
  app.add_option("--format", format, "auto, npy or csv")
      ->transform(CLI::CheckedTransformer(formats, CLI::ignore_case));
  auto* geo_opt = app.add_option("--geodesic-samples", geodesic_samples, "points on the input-target polyline")
                      ->check(CLI::Range(2, 100000));
  auto* mds_opt = app.add_option("--mds-dim", mds_dim, "intermediate MDS dimension")->check(CLI::PositiveNumber);
  auto* target_opt = app.add_flag("--no-target", no_target, "leave the target out of the distance matrix");
  auto* depth_opt = app.add_flag("--depth-normalize,!--no-depth-normalize", depth_normalize,
                                 "key compare rows by l/L (default) or by l");
  auto* svg_opt = app.add_flag("--svg", svg, "also render path.svg");

  std::vector<std::string> manifests;
  std::string manifest;
  auto* distances = app.add_subcommand("distances", "pairwise distance matrix");
  auto* path = app.add_subcommand("path", "full geometry report");
  auto* mds = app.add_subcommand("mds", "2D embedding and SVG");
  auto* pd = app.add_subcommand("progress-deviation", "per-step progress and deviation");
  auto* compare = app.add_subcommand("compare", "depth-aligned table across models");
  auto* crossval = app.add_subcommand("crossval", "fold statistics over resampled subsets");
  for (auto* sub : {distances, path, mds, pd, crossval}) {
    sub->add_option("manifest", manifest, "dataset manifest (JSON)")->required()->check(CLI::ExistingFile);
  }
  compare->add_option("manifests", manifests, "dataset manifests (JSON)")->required()->check(CLI::ExistingFile);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : kUsageError;
  }

  const bool shape = metric == RG_METRIC_ANGULAR_SHAPE || metric == RG_METRIC_EUCLIDEAN_SHAPE;
  const bool air = metric == RG_METRIC_AIR_GRAM || metric == RG_METRIC_AIR_COVARIANCE;
  const bool kernelized = metric == RG_METRIC_ANGULAR_CKA || metric == RG_METRIC_AIR_GRAM;
  if (!kernel_opt->count()) {
    kernel = metric == RG_METRIC_AIR_GRAM ? RG_KERNEL_SQUARED_EXPONENTIAL : RG_KERNEL_LINEAR;
  }
  if (kernel_opt->count() && !kernelized) return usage_error("--kernel applies to angular-cka and air-gram");
  if (tau_opt->count() && (!kernelized || kernel != RG_KERNEL_SQUARED_EXPONENTIAL)) {
    return usage_error("--tau requires the se kernel");
  }
  if (p_opt->count() && !(shape || metric == RG_METRIC_AIR_COVARIANCE)) {
    return usage_error("--p applies to shape metrics and air-cov");
  }
  if (alpha_opt->count() && !shape) return usage_error("--alpha applies to shape metrics");
  if (eps_opt->count() && !air) return usage_error("--epsilon applies to AIR metrics");
  if (target_opt->count() && !distances->parsed()) return usage_error("--no-target applies to distances");
  if (folds_opt->count() && !crossval->parsed()) return usage_error("--folds applies to crossval");
  if (depth_opt->count() && !compare->parsed()) return usage_error("--depth-normalize applies to compare");
  if (svg_opt->count() && !path->parsed()) return usage_error("--svg applies to path (mds always writes SVG)");
  if ((geo_opt->count() || mds_opt->count()) && !(path->parsed() || mds->parsed())) {
    return usage_error("--geodesic-samples and --mds-dim apply to path and mds");
  }

  opts.metric.metric = metric;
  opts.metric.kernel = kernel;
  opts.metric.length_scale = tau;
  opts.metric.p = p;
  opts.metric.alpha = alpha;
  opts.metric.epsilon = epsilon;
  opts.subsample = subsample;
  opts.seed = seed;
  opts.folds = folds;
  opts.include_target = no_target ? 0 : 1;
  opts.depth_normalize = depth_normalize ? 1 : 0;
  opts.write_svg = svg ? 1 : 0;
  opts.geodesic_samples = geodesic_samples;
  opts.mds_dim = mds_dim;
  opts.format = format;

  rg_status status = RG_OK;
  if (distances->parsed()) status = rg_run_distances(manifest.c_str(), &opts, out.c_str());
  if (path->parsed()) status = rg_run_path(manifest.c_str(), &opts, out.c_str());
  if (mds->parsed()) status = rg_run_mds(manifest.c_str(), &opts, out.c_str());
  if (pd->parsed()) status = rg_run_progress_deviation(manifest.c_str(), &opts, out.c_str());
  if (crossval->parsed()) status = rg_run_crossval(manifest.c_str(), &opts, out.c_str());
  if (compare->parsed()) {
    std::vector<const char*> paths;
    for (const auto& m : manifests) paths.push_back(m.c_str());
    status = rg_run_compare(paths.data(), paths.size(), &opts, out.c_str());
  }
  if (status != RG_OK) {
    std::fprintf(stderr, "repgeom: %s: %s\n", rg_status_name(status), rg_last_error());
    return status == RG_ERR_INVALID_ARGUMENT ? kUsageError : 1;
  }
  return 0;
}
