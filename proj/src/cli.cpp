/*
 * Copyright 2026 The outpaint Authors
 *
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 *     http://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */
#include "outpaint/cli.hpp"

#include <algorithm>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <map>
#include <set>
#include <string>
#include <vector>

#include "outpaint/dataset.hpp"
#include "outpaint/edgemap.hpp"
#include "outpaint/errors.hpp"
#include "outpaint/image_io.hpp"
#include "outpaint/mask_schedule.hpp"
#include "outpaint/metrics.hpp"
#include "outpaint/net.hpp"
#include "outpaint/rearrange.hpp"

namespace fs = std::filesystem;

namespace outpaint {

namespace {

// Flag problems are reported with the usage text and exit code 1; anything
// thrown past the parser is a data (2) or numeric (3) failure.
struct UsageError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

const char* kUsage = R"(usage: outpaint <subcommand> [flags]

subcommands:
  rearrange <image>    circularly shift the canvas (--inverse undoes it)
  schedule             dump the progressive mask schedule (JSON, masks)
  edges <image|dir>    detect edges in an image or every image in a directory
  train                train the edge stage, completion stage, or both
  infer <image>        outpaint an image using trained checkpoints
  evaluate             metric report over two directories of paired images
  ablate-loss          train the edge stage under both loss variants

flags:
  --config PATH        JSON config file (flat dotted keys); flags override it
  --seed N             training seed
  --width N            image width (schedule/train), output width (infer)
  --height N           image height (schedule/train)
  --steps N            schedule step count
  --loss NAME          hinge | nsgan
  --sigma X            edge detector blur sigma
  --stage NAME         train: edge | completion | both
  --data DIR           training dataset directory (default: synthetic set)
  --out PATH           output file or directory
  --checkpoint DIR     checkpoint directory (written by train, read by infer)
  --brisque-model PATH no-reference quality model JSON
  --pred DIR           evaluate: prediction directory
  --gt DIR             evaluate: ground-truth directory
  --inverse            rearrange: apply the inverse shift
)";

struct ParsedArgs {
    std::string subcommand;
    std::map<std::string, std::string> flags;
    std::vector<std::string> positional;

    bool has(const std::string& name) const { return flags.count(name) != 0; }
    std::string get(const std::string& name, const std::string& fallback = "") const {
        auto it = flags.find(name);
        return it == flags.end() ? fallback : it->second;
    }
};

const std::set<std::string> kValueFlags = {
    "--config", "--seed",       "--width",      "--height",
    "--steps",  "--loss",       "--sigma",      "--stage",
    "--data",   "--out",        "--checkpoint", "--brisque-model",
    "--pred",   "--gt",
};

ParsedArgs parse_args(int argc, const char* const* argv) {
    if (argc < 2) throw UsageError("missing subcommand");
    ParsedArgs out;
    out.subcommand = argv[1];
    for (int i = 2; i < argc; ++i) {
        const std::string arg = argv[i];
        if (arg == "--inverse") {
            out.flags[arg] = "1";
        } else if (kValueFlags.count(arg)) {
            if (i + 1 >= argc) throw UsageError(arg + " requires a value");
            out.flags[arg] = argv[++i];
        } else if (arg.rfind("--", 0) == 0) {
            throw UsageError("unknown flag: " + arg);
        } else {
            out.positional.push_back(arg);
        }
    }
    return out;
}

int parse_int_flag(const ParsedArgs& args, const std::string& name, int fallback) {
    if (!args.has(name)) return fallback;
    try {
        std::size_t used = 0;
        const int v = std::stoi(args.get(name), &used);
        if (used != args.get(name).size()) throw std::invalid_argument(name);
        return v;
    } catch (const std::exception&) {
        throw UsageError(name + " expects an integer, got '" + args.get(name) + "'");
    }
}

double parse_double_flag(const ParsedArgs& args, const std::string& name,
                         double fallback) {
    if (!args.has(name)) return fallback;
    try {
        std::size_t used = 0;
        const double v = std::stod(args.get(name), &used);
        if (used != args.get(name).size()) throw std::invalid_argument(name);
        return v;
    } catch (const std::exception&) {
        throw UsageError(name + " expects a number, got '" + args.get(name) + "'");
    }
}

// Reads the config file (when given) and layers flag overrides on top.
RunConfig resolve_config(const ParsedArgs& args) {
    RunConfig cfg;
    if (args.has("--config")) {
        std::ifstream in(args.get("--config"));
        if (!in) throw FileError("cannot open config: " + args.get("--config"));
        nlohmann::json j;
        try {
            in >> j;
        } catch (const nlohmann::json::exception& e) {
            throw DataError(args.get("--config") + ": invalid json: " + e.what());
        }
        cfg = config_from_json(j);
    }
    if (args.has("--seed")) {
        cfg.train.seed = static_cast<std::uint64_t>(
            parse_int_flag(args, "--seed", 0));
    }
    if (args.has("--width")) {
        cfg.train.schedule.image_width = parse_int_flag(args, "--width", 0);
        cfg.infer_out_width = cfg.train.schedule.image_width;
    }
    if (args.has("--height")) {
        cfg.train.schedule.image_height = parse_int_flag(args, "--height", 0);
    }
    if (args.has("--steps")) {
        cfg.train.schedule.total_steps = parse_int_flag(args, "--steps", 0);
    }
    if (args.has("--loss")) {
        try {
            cfg.train.loss_variant = loss_variant_from_name(args.get("--loss"));
        } catch (const ValueError& e) {
            throw UsageError(e.what());
        }
    }
    if (args.has("--sigma")) {
        cfg.train.canny.gaussian_sigma = parse_double_flag(args, "--sigma", 0.0);
    }
    if (args.has("--stage")) {
        const std::string s = args.get("--stage");
        if (s != "edge" && s != "completion" && s != "both") {
            throw UsageError("--stage expects edge, completion, or both");
        }
        cfg.stage = s;
    }
    if (args.has("--data")) cfg.dataset_dir = args.get("--data");
    if (args.has("--out")) cfg.out_path = args.get("--out");
    if (args.has("--checkpoint")) cfg.checkpoint_dir = args.get("--checkpoint");
    if (args.has("--brisque-model")) {
        cfg.brisque_model_path = args.get("--brisque-model");
    }
    return cfg;
}

void write_json_file(const nlohmann::json& j, const fs::path& path) {
    std::ofstream out(path);
    if (!out) throw FileError("cannot write " + path.string());
    out << j.dump(2) << "\n";
    if (!out) throw FileError("failed writing " + path.string());
}

// Audit trail: the fully-resolved configuration lands next to whatever the
// run produced — inside an output directory, or as <file>.config.json
// beside a single output file.
void write_resolved_config(const RunConfig& cfg, const std::string& out_path) {
    if (out_path.empty()) return;
    const fs::path p(out_path);
    const fs::path target = fs::is_directory(p)
                                ? p / "resolved_config.json"
                                : fs::path(out_path + ".config.json");
    write_json_file(config_to_json(cfg), target);
}

nlohmann::json json_metric(double v) {
    if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
    return v;
}

nlohmann::json curve_json(const std::vector<std::pair<int, double>>& curve) {
    nlohmann::json arr = nlohmann::json::array();
    for (const auto& [iter, value] : curve) arr.push_back({iter, value});
    return arr;
}

ImageTensor as_gray(const ImageTensor& img) {
    return img.channels == 1 ? img : to_grayscale(img);
}

bool is_image_file(const fs::path& p) {
    const std::string ext = p.extension().string();
    return ext == ".png" || ext == ".ppm" || ext == ".pgm";
}

std::vector<fs::path> sorted_image_files(const std::string& dir) {
    if (!fs::is_directory(dir)) {
        throw FileError("not a directory: " + dir);
    }
    std::vector<fs::path> files;
    for (const auto& entry : fs::directory_iterator(dir)) {
        if (entry.is_regular_file() && is_image_file(entry.path())) {
            files.push_back(entry.path());
        }
    }
    std::sort(files.begin(), files.end());
    return files;
}

// Loss-curve spread across the last schedule step: the window where the
// mask has reached its final width and both variants see the same task.
double final_step_peak_to_peak(const std::vector<double>& g_loss,
                               int iters_per_step) {
    const std::size_t window =
        std::min<std::size_t>(g_loss.size(), static_cast<std::size_t>(iters_per_step));
    if (window == 0) return 0.0;
    const auto first = g_loss.end() - static_cast<std::ptrdiff_t>(window);
    const auto [lo, hi] = std::minmax_element(first, g_loss.end());
    return *hi - *lo;
}

std::vector<ImageTensor> load_training_dataset(const RunConfig& cfg) {
    if (!cfg.dataset_dir.empty()) {
        return load_image_directory(cfg.dataset_dir, cfg.train.image_width(),
                                    cfg.train.image_height());
    }
    return make_synthetic_dataset(cfg.synthetic_count, cfg.train.image_width(),
                                  cfg.train.image_height(), cfg.dataset_seed);
}

void write_stage_outputs(const StageResult& result, const std::string& prefix,
                         const std::string& metric_name, const RunConfig& cfg,
                         const fs::path& out_dir, nlohmann::json& metrics) {
    {
        std::ofstream log(out_dir / (prefix + "_log.jsonl"));
        if (!log) throw FileError("cannot write training log");
        for (const auto& line : result.log_lines) log << line << "\n";
    }
    CheckpointMeta meta;
    meta.seed = cfg.train.seed;
    meta.step = cfg.train.schedule.total_steps;
    save_checkpoint(result.generator, meta,
                    (out_dir / (prefix + "_generator.ckpt")).string());
    save_checkpoint(result.discriminator, meta,
                    (out_dir / (prefix + "_discriminator.ckpt")).string());
    metrics[prefix] = {
        {"metric", metric_name},
        {"initial", result.initial_metric},
        {"final", result.final_metric},
        {"curve", curve_json(result.metric_curve)},
    };
}

int cmd_rearrange(const ParsedArgs& args) {
    if (args.positional.size() != 1) {
        throw UsageError("rearrange expects exactly one input image");
    }
    const RunConfig cfg = resolve_config(args);
    if (cfg.out_path.empty()) throw UsageError("rearrange requires --out");
    const ImageTensor img = load_image(args.positional[0]);
    // A canvas with no unknown flank still shifts: width decides everything.
    OutpaintCanvas canvas = make_outpaint_canvas(img, img.width);
    canvas = args.has("--inverse") ? rearrange_inverse(canvas)
                                   : rearrange_forward(canvas);
    save_image(canvas.image, cfg.out_path);
    write_resolved_config(cfg, cfg.out_path);
    return 0;
}

int cmd_schedule(const ParsedArgs& args) {
    RunConfig cfg = resolve_config(args);
    if (!args.has("--height")) {
        // The canonical canvas is twice as wide as tall.
        cfg.train.schedule.image_height = std::max(1, cfg.train.schedule.image_width / 2);
    }
    const ScheduleSpec& spec = cfg.train.schedule;
    spec.validate();
    nlohmann::json j = {
        {"image_width", spec.image_width},
        {"image_height", spec.image_height},
        {"total_steps", spec.total_steps},
    };
    nlohmann::json widths = nlohmann::json::array();
    for (int step = 1; step <= spec.total_steps; ++step) {
        widths.push_back(mask_width_at_step(spec, step));
    }
    j["widths"] = widths;
    if (cfg.out_path.empty()) {
        std::cout << j.dump(2) << "\n";
        return 0;
    }
    fs::create_directories(cfg.out_path);
    write_json_file(j, fs::path(cfg.out_path) / "schedule.json");
    for (int step = 1; step <= spec.total_steps; ++step) {
        const BinaryMask mask = build_center_mask(spec, step);
        ImageTensor img(mask.height, mask.width, 1);
        for (std::size_t i = 0; i < mask.data.size(); ++i) {
            img.data[i] = mask.data[i] ? 1.0 : 0.0;
        }
        char name[32];
        std::snprintf(name, sizeof(name), "mask_%02d.pgm", step);
        save_image(img, (fs::path(cfg.out_path) / name).string());
    }
    write_resolved_config(cfg, cfg.out_path);
    return 0;
}

int cmd_edges(const ParsedArgs& args) {
    if (args.positional.size() != 1) {
        throw UsageError("edges expects exactly one input image or directory");
    }
    const RunConfig cfg = resolve_config(args);
    if (cfg.out_path.empty()) throw UsageError("edges requires --out");
    cfg.train.canny.validate();
    const std::string& input = args.positional[0];

    if (fs::is_directory(input)) {
        fs::create_directories(cfg.out_path);
        for (const auto& file : sorted_image_files(input)) {
            const ImageTensor edges =
                canny_edges(as_gray(load_image(file.string())), cfg.train.canny);
            const fs::path out =
                fs::path(cfg.out_path) / file.filename().replace_extension(".pgm");
            save_image(edges, out.string());
        }
        write_resolved_config(cfg, cfg.out_path);
        return 0;
    }
    const ImageTensor edges =
        canny_edges(as_gray(load_image(input)), cfg.train.canny);
    save_image(edges, cfg.out_path);
    write_resolved_config(cfg, cfg.out_path);
    return 0;
}

int cmd_train(const ParsedArgs& args) {
    const RunConfig cfg = resolve_config(args);
    if (cfg.out_path.empty()) throw UsageError("train requires --out");
    cfg.train.validate();
    if (cfg.stage == "completion" && cfg.checkpoint_dir.empty()) {
        throw UsageError(
            "train --stage completion needs --checkpoint for the edge stage");
    }
    const std::vector<ImageTensor> dataset = load_training_dataset(cfg);
    fs::create_directories(cfg.out_path);
    const fs::path out_dir(cfg.out_path);
    nlohmann::json metrics;

    ToyNetwork edge_generator;
    if (cfg.stage == "edge" || cfg.stage == "both") {
        StageResult edge = train_edge_stage(cfg.train, dataset);
        write_stage_outputs(edge, "edge", "edge_f1", cfg, out_dir, metrics);
        edge_generator = std::move(edge.generator);
    } else {
        edge_generator = load_checkpoint(
            (fs::path(cfg.checkpoint_dir) / "edge_generator.ckpt").string());
    }
    if (cfg.stage == "completion" || cfg.stage == "both") {
        StageResult comp = train_completion_stage(cfg.train, dataset, edge_generator);
        write_stage_outputs(comp, "completion", "masked_l1", cfg, out_dir, metrics);
    }
    write_json_file(metrics, out_dir / "metrics.json");
    write_resolved_config(cfg, cfg.out_path);
    return 0;
}

int cmd_infer(const ParsedArgs& args) {
    if (args.positional.size() != 1) {
        throw UsageError("infer expects exactly one input image");
    }
    const RunConfig cfg = resolve_config(args);
    if (cfg.out_path.empty()) throw UsageError("infer requires --out");
    if (cfg.checkpoint_dir.empty()) throw UsageError("infer requires --checkpoint");
    if (cfg.infer_out_width <= 0) {
        throw UsageError("infer requires --width (or infer.out_width in config)");
    }
    const ImageTensor input = load_image(args.positional[0]);
    ToyNetwork edge_generator = load_checkpoint(
        (fs::path(cfg.checkpoint_dir) / "edge_generator.ckpt").string());
    ToyNetwork completion_generator = load_checkpoint(
        (fs::path(cfg.checkpoint_dir) / "completion_generator.ckpt").string());
    const ImageTensor out = infer_outpaint(edge_generator, completion_generator,
                                           input, cfg.infer_out_width,
                                           cfg.train.canny);
    save_image(out, cfg.out_path);
    write_resolved_config(cfg, cfg.out_path);
    return 0;
}

int cmd_evaluate(const ParsedArgs& args) {
    if (!args.has("--pred") || !args.has("--gt")) {
        throw UsageError("evaluate requires --pred and --gt");
    }
    const RunConfig cfg = resolve_config(args);
    const nlohmann::json report = evaluate_directory(
        args.get("--pred"), args.get("--gt"), cfg.brisque_model_path);
    if (cfg.out_path.empty()) {
        std::cout << report.dump(2) << "\n";
    } else {
        write_json_file(report, cfg.out_path);
        write_resolved_config(cfg, cfg.out_path);
    }
    return 0;
}

int cmd_ablate_loss(const ParsedArgs& args) {
    RunConfig cfg = resolve_config(args);
    cfg.train.validate();
    const std::vector<ImageTensor> dataset = load_training_dataset(cfg);

    nlohmann::json variants;
    double amplitude[2] = {0.0, 0.0};
    int idx = 0;
    for (const LossVariant variant : {LossVariant::hinge, LossVariant::nsgan}) {
        TrainConfig train = cfg.train;
        train.loss_variant = variant;
        const StageResult result = train_edge_stage(train, dataset);
        const double p2p =
            final_step_peak_to_peak(result.g_loss, train.iters_per_step);
        amplitude[idx++] = p2p;
        variants[loss_variant_name(variant)] = {
            {"initial_f1", result.initial_metric},
            {"final_f1", result.final_metric},
            {"f1_curve", curve_json(result.metric_curve)},
            {"final_step_peak_to_peak", p2p},
        };
    }
    nlohmann::json report = {
        {"variants", variants},
        {"comparison",
         {{"hinge_minus_nsgan_peak_to_peak", amplitude[0] - amplitude[1]},
          {"note",
           "Peak-to-peak generator-loss spread over the final schedule step; "
           "smaller means a steadier objective. The ordering is seed-dependent "
           "at this scale, so no winner is declared."}}},
    };
    if (cfg.out_path.empty()) {
        std::cout << report.dump(2) << "\n";
        return 0;
    }
    fs::create_directories(cfg.out_path);
    write_json_file(report, fs::path(cfg.out_path) / "ablation.json");
    write_resolved_config(cfg, cfg.out_path);
    return 0;
}

} // namespace

nlohmann::json config_to_json(const RunConfig& cfg) {
    return nlohmann::json{
        {"seed", cfg.train.seed},
        {"train.iters_per_step", cfg.train.iters_per_step},
        {"train.batch_size", cfg.train.batch_size},
        {"train.lr_initial", cfg.train.lr_initial},
        {"train.lr_fine", cfg.train.lr_fine},
        {"train.d_lr_scale", cfg.train.d_lr_scale},
        {"train.loss", loss_variant_name(cfg.train.loss_variant)},
        {"train.eval_interval", cfg.train.eval_interval},
        {"train.stage", cfg.stage},
        {"schedule.total_steps", cfg.train.schedule.total_steps},
        {"schedule.start_fraction", cfg.train.schedule.start_fraction},
        {"schedule.end_fraction", cfg.train.schedule.end_fraction},
        {"schedule.image_width", cfg.train.schedule.image_width},
        {"schedule.image_height", cfg.train.schedule.image_height},
        {"canny.sigma", cfg.train.canny.gaussian_sigma},
        {"canny.low", cfg.train.canny.low_threshold},
        {"canny.high", cfg.train.canny.high_threshold},
        {"weights.l1", cfg.train.weights.lambda_l1},
        {"weights.adv", cfg.train.weights.lambda_adv},
        {"weights.perc", cfg.train.weights.lambda_perc},
        {"weights.style", cfg.train.weights.lambda_style},
        {"weights.hinge", cfg.train.weights.lambda_hinge},
        {"weights.fm", cfg.train.weights.lambda_fm},
        {"dataset.dir", cfg.dataset_dir},
        {"dataset.synthetic_count", cfg.synthetic_count},
        {"dataset.seed", cfg.dataset_seed},
        {"infer.out_width", cfg.infer_out_width},
        {"paths.out", cfg.out_path},
        {"paths.checkpoint", cfg.checkpoint_dir},
        {"paths.brisque_model", cfg.brisque_model_path},
    };
}

RunConfig config_from_json(const nlohmann::json& j) {
    RunConfig cfg;
    try {
        for (const auto& [key, value] : j.items()) {
            if (key == "seed") cfg.train.seed = value.get<std::uint64_t>();
            else if (key == "train.iters_per_step") cfg.train.iters_per_step = value.get<int>();
            else if (key == "train.batch_size") cfg.train.batch_size = value.get<int>();
            else if (key == "train.lr_initial") cfg.train.lr_initial = value.get<double>();
            else if (key == "train.lr_fine") cfg.train.lr_fine = value.get<double>();
            else if (key == "train.d_lr_scale") cfg.train.d_lr_scale = value.get<double>();
            else if (key == "train.loss") cfg.train.loss_variant = loss_variant_from_name(value.get<std::string>());
            else if (key == "train.eval_interval") cfg.train.eval_interval = value.get<int>();
            else if (key == "train.stage") cfg.stage = value.get<std::string>();
            else if (key == "schedule.total_steps") cfg.train.schedule.total_steps = value.get<int>();
            else if (key == "schedule.start_fraction") cfg.train.schedule.start_fraction = value.get<double>();
            else if (key == "schedule.end_fraction") cfg.train.schedule.end_fraction = value.get<double>();
            else if (key == "schedule.image_width") cfg.train.schedule.image_width = value.get<int>();
            else if (key == "schedule.image_height") cfg.train.schedule.image_height = value.get<int>();
            else if (key == "canny.sigma") cfg.train.canny.gaussian_sigma = value.get<double>();
            else if (key == "canny.low") cfg.train.canny.low_threshold = value.get<double>();
            else if (key == "canny.high") cfg.train.canny.high_threshold = value.get<double>();
            else if (key == "weights.l1") cfg.train.weights.lambda_l1 = value.get<double>();
            else if (key == "weights.adv") cfg.train.weights.lambda_adv = value.get<double>();
            else if (key == "weights.perc") cfg.train.weights.lambda_perc = value.get<double>();
            else if (key == "weights.style") cfg.train.weights.lambda_style = value.get<double>();
            else if (key == "weights.hinge") cfg.train.weights.lambda_hinge = value.get<double>();
            else if (key == "weights.fm") cfg.train.weights.lambda_fm = value.get<double>();
            else if (key == "dataset.dir") cfg.dataset_dir = value.get<std::string>();
            else if (key == "dataset.synthetic_count") cfg.synthetic_count = value.get<int>();
            else if (key == "dataset.seed") cfg.dataset_seed = value.get<std::uint64_t>();
            else if (key == "infer.out_width") cfg.infer_out_width = value.get<int>();
            else if (key == "paths.out") cfg.out_path = value.get<std::string>();
            else if (key == "paths.checkpoint") cfg.checkpoint_dir = value.get<std::string>();
            else if (key == "paths.brisque_model") cfg.brisque_model_path = value.get<std::string>();
            else throw DataError("unknown config key: " + key);
        }
    } catch (const nlohmann::json::exception& e) {
        throw DataError(std::string("config value has the wrong type: ") + e.what());
    } catch (const ValueError& e) {
        throw DataError(e.what());
    }
    return cfg;
}

nlohmann::json evaluate_directory(const std::string& pred_dir,
                                  const std::string& gt_dir,
                                  const std::string& brisque_model_path) {
    std::map<std::string, fs::path> pred_files, gt_files;
    for (const auto& p : sorted_image_files(pred_dir)) {
        pred_files[p.filename().string()] = p;
    }
    for (const auto& p : sorted_image_files(gt_dir)) {
        gt_files[p.filename().string()] = p;
    }
    std::vector<std::string> only_pred, only_gt, paired;
    for (const auto& [name, path] : pred_files) {
        (gt_files.count(name) ? paired : only_pred).push_back(name);
    }
    for (const auto& [name, path] : gt_files) {
        if (!pred_files.count(name)) only_gt.push_back(name);
    }
    if (!only_pred.empty() || !only_gt.empty()) {
        std::string msg = "directory contents do not pair up;";
        for (const auto& n : only_pred) msg += " only in pred: " + n;
        for (const auto& n : only_gt) msg += " only in gt: " + n;
        throw DataError(msg);
    }
    if (paired.empty()) {
        throw DataError("no image files to compare in " + pred_dir + " and " + gt_dir);
    }

    const bool have_model = !brisque_model_path.empty();
    BrisqueModel model;
    if (have_model) model = load_brisque_model(brisque_model_path);

    nlohmann::json files = nlohmann::json::array();
    double psnr_sum = 0.0;
    double ssim_sum = 0.0;
    double brisque_sum = 0.0;
    bool psnr_inf = false;
    for (const auto& name : paired) {
        const ImageTensor pred = load_image(pred_files[name].string());
        const ImageTensor gt = load_image(gt_files[name].string());
        const double p = psnr(pred, gt);
        const double s = ssim(as_gray(pred), as_gray(gt));
        nlohmann::json row = {{"file", name}, {"psnr", json_metric(p)}, {"ssim", s}};
        const auto features = brisque_features(as_gray(pred));
        if (have_model) {
            const double score = brisque_score(features, model);
            row["brisque"] = score;
            brisque_sum += score;
        } else {
            row["brisque_features"] = features;
        }
        files.push_back(row);
        if (std::isinf(p)) psnr_inf = true;
        else psnr_sum += p;
        ssim_sum += s;
    }
    const double n = static_cast<double>(paired.size());
    nlohmann::json aggregate = {
        {"count", paired.size()},
        {"psnr_mean", psnr_inf ? nlohmann::json("inf") : nlohmann::json(psnr_sum / n)},
        {"ssim_mean", ssim_sum / n},
    };
    if (have_model) aggregate["brisque_mean"] = brisque_sum / n;
    return nlohmann::json{{"files", files}, {"aggregate", aggregate}};
}

int run_cli(int argc, const char* const* argv) {
    try {
        const ParsedArgs args = parse_args(argc, argv);
        if (args.subcommand == "rearrange") return cmd_rearrange(args);
        if (args.subcommand == "schedule") return cmd_schedule(args);
        if (args.subcommand == "edges") return cmd_edges(args);
        if (args.subcommand == "train") return cmd_train(args);
        if (args.subcommand == "infer") return cmd_infer(args);
        if (args.subcommand == "evaluate") return cmd_evaluate(args);
        if (args.subcommand == "ablate-loss") return cmd_ablate_loss(args);
        throw UsageError("unknown subcommand: " + args.subcommand);
    } catch (const UsageError& e) {
        std::cerr << "error: " << e.what() << "\n" << kUsage;
        return 1;
    } catch (const NumericError& e) {
        std::cerr << "numeric failure: " << e.what() << "\n";
        return 3;
    } catch (const Error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    }
}

} // namespace outpaint
