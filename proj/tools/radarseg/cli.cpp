/*
 * Copyright 2026 The radarseg Authors. All Rights Reserved.
 *
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 *       http://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */

#include "cli.hpp"

#include <omp.h>

#include <chrono>
#include <ctime>
#include <fstream>
#include <iomanip>
#include <ostream>
#include <sstream>

#include "CLI11.hpp"
#include "json.hpp"
#include "radarseg/config.hpp"
#include "radarseg/evalbench.hpp"
#include "radarseg/synthgen.hpp"

namespace radarseg::cli {

namespace {

namespace fs = std::filesystem;
using nlohmann::json;

std::string utc_now() {
    const std::time_t t = std::time(nullptr);
    std::tm tm{};
    gmtime_r(&t, &tm);
    std::ostringstream os;
    os << std::put_time(&tm, "%Y-%m-%dT%H:%M:%SZ");
    return os.str();
}

std::string path_hash(const fs::path& p) {
    if (fs::is_directory(p)) {
        std::string all;
        for (const auto& f : dataset_files(p)) all += f.filename().string() + ":" + file_hash(f) + "\n";
        return content_hash(all);
    }
    return file_hash(p);
}

/// Run manifest: what ran, with which settings and inputs, and what it wrote.
class RunManifest {
public:
    RunManifest(std::string command, int argc, const char* const* argv)
        : started_(std::chrono::steady_clock::now()) {
        j_["command"] = std::move(command);
        j_["argv"] = std::vector<std::string>(argv, argv + argc);
        j_["started_utc"] = utc_now();
        j_["inputs"] = json::object();
        j_["outputs"] = json::array();
        j_["config"] = json::object();
    }

    void set_seed(std::uint64_t seed) { j_["seed"] = seed; }
    json& config() { return j_["config"]; }
    void add_input(const fs::path& p) { j_["inputs"][p.string()] = path_hash(p); }
    void add_output(const fs::path& p) { j_["outputs"].push_back(p.string()); }

    json finish() {
        j_["finished_utc"] = utc_now();
        j_["wall_seconds"] =
            std::chrono::duration<double>(std::chrono::steady_clock::now() - started_).count();
        return j_;
    }

private:
    json j_;
    std::chrono::steady_clock::time_point started_;
};

void write_text(const fs::path& p, const std::string& text) {
    if (p.has_parent_path()) fs::create_directories(p.parent_path());
    std::ofstream out(p, std::ios::binary | std::ios::trunc);
    if (!out) throw InputError("cannot write " + p.string());
    out << text;
    if (!out) throw InputError("failed writing " + p.string());
}

json read_json(const fs::path& p) {
    std::ifstream in(p);
    if (!in) throw InputError("cannot open " + p.string());
    try {
        return json::parse(in);
    } catch (const json::exception& e) {
        throw InputError(p.string() + ": " + e.what());
    }
}

struct GridOpts {
    int cells = 512;
    double cell_size = 0.4;
};

void add_grid_options(CLI::App* app, GridOpts& g) {
    app->add_option("--grid-cells", g.cells, "grid cells per side")->check(CLI::PositiveNumber);
    app->add_option("--cell-size", g.cell_size, "cell edge length in metres")->check(CLI::PositiveNumber);
}

Dataset load_windows(const fs::path& data, int stride) {
    const auto seqs = load_dataset(data);
    Dataset d = make_dataset(seqs, stride);
    if (d.windows.empty()) throw InputError("no windows in " + data.string());
    return d;
}

void set_threads(int threads) {
    if (threads < 0) throw InputError("--threads must be >= 0");
    if (threads > 0) omp_set_num_threads(threads);
}

std::vector<std::string> split_csv(const std::string& s) {
    std::vector<std::string> out;
    std::stringstream ss(s);
    std::string item;
    while (std::getline(ss, item, ','))
        if (!item.empty()) out.push_back(item);
    return out;
}

Variant require_variant(const std::string& name) {
    const auto v = parse_variant(name);
    if (!v) throw InputError("unknown variant '" + name + "'");
    return *v;
}

// ---------------------------------------------------------------- gen

struct GenArgs {
    std::string config;
    std::string out;
    std::optional<std::uint64_t> seed;
    std::optional<int> sequences;
    std::optional<int> test_sequences;
};

int cmd_gen(const GenArgs& a, RunManifest& man, std::ostream& out) {
    KeyValueConfig kv;
    if (!a.config.empty()) {
        kv = KeyValueConfig::load(a.config);
        man.add_input(a.config);
    }
    const auto cfg_seq = kv.get_int("sequences");
    const int n_seq = a.sequences ? *a.sequences : static_cast<int>(cfg_seq.value_or(1));
    const auto cfg_test = kv.get_int("test_sequences");
    const int n_test = a.test_sequences ? *a.test_sequences : static_cast<int>(cfg_test.value_or(0));
    SceneConfig scene = scene_config_from(kv);
    if (a.seed) scene.rng_seed = *a.seed;
    if (const auto extra = kv.unconsumed(); !extra.empty())
        throw InputError("unknown config key '" + extra.front() + "'");
    if (n_seq < 1) throw InputError("sequences must be >= 1");
    if (n_test < 0 || n_test >= n_seq) throw InputError("test_sequences must be in [0, sequences)");
    scene.validate();

    for (const auto& [k, v] : kv.values()) man.config()[k] = v;
    man.set_seed(scene.rng_seed);

    const fs::path root(a.out);
    fs::create_directories(root);
    const auto seqs = generate_sequences(scene, n_seq);
    json files = json::object();
    std::string all;
    std::size_t n_det = 0;
    for (int i = 0; i < n_seq; ++i) {
        fs::path dir = root;
        if (n_test > 0) dir /= (i < n_seq - n_test ? "train" : "test");
        fs::create_directories(dir);
        char name[32];
        std::snprintf(name, sizeof name, "seq_%03d.jsonl", i);
        const fs::path p = dir / name;
        save_scan_stream(p, seqs[static_cast<std::size_t>(i)].scans);
        const std::string h = file_hash(p);
        files[fs::relative(p, root).string()] = h;
        all += fs::relative(p, root).string() + ":" + h + "\n";
        man.add_output(p);
        for (const auto& s : seqs[static_cast<std::size_t>(i)].scans) n_det += s.detections.size();
    }
    json m = man.finish();
    m["files"] = files;
    m["dataset_hash"] = content_hash(all);
    write_text(root / "manifest.json", m.dump(2) + "\n");
    out << "wrote " << n_seq << " sequences (" << n_det << " detections) to " << root.string()
        << "\ndataset_hash " << m["dataset_hash"].get<std::string>() << "\n";
    return kExitOk;
}

// ---------------------------------------------------------------- train

struct TrainArgs {
    std::string variant;
    std::string data;
    std::string out;
    std::string front;
    GridOpts grid;
    int epochs = 20;
    std::uint64_t seed = 1;
    int wide = 64;
    int narrow = 32;
    int depth = 2;
    int branch_convs = 1;
    int stride = 1;
    int batch = TrainConfig{}.batch_size;
    double lr_min = TrainConfig{}.lr_min;
    double lr_max = TrainConfig{}.lr_max;
    double gamma = TrainConfig{}.gamma;
    int threads = 0;
};

int cmd_train(const TrainArgs& a, RunManifest& man, std::ostream& out) {
    set_threads(a.threads);
    const Variant v = require_variant(a.variant);
    ModelOptions mo;
    mo.grid = GridConfig::square(a.grid.cells, a.grid.cell_size);
    mo.backbone.wide = a.wide;
    mo.backbone.narrow = a.narrow;
    mo.backbone.deconv_channels = a.narrow;
    mo.backbone.depth = a.depth;
    mo.backbone.validate();
    mo.branch_convs = a.branch_convs;
    mo.seed = a.seed;

    Model model;
    if (!a.front.empty()) {
        if (v != Variant::SeriesConnection) throw InputError("--front only applies to the series variant");
        const Model front = load_model(a.front);
        if (!(front.grid.rows == mo.grid.rows && front.grid.cell_size == mo.grid.cell_size))
            throw InputError("--front was trained on a different grid");
        mo.backbone = front.nets.at(0).net.config();
        model = series_from_front(front, mo);
        man.add_input(a.front);
    } else {
        model = build_model(v, mo);
    }
    const Dataset data = load_windows(a.data, a.stride);
    man.add_input(a.data);

    TrainConfig tc;
    tc.epochs = a.epochs;
    tc.batch_size = a.batch;
    tc.lr_min = a.lr_min;
    tc.lr_max = a.lr_max;
    tc.gamma = a.gamma;
    tc.seed = a.seed;
    tc.on_epoch = [&out](int e, double loss) {
        out << "epoch " << e + 1 << " loss " << std::fixed << std::setprecision(5) << loss << std::endl;
    };
    out << "training " << variant_name(v) << " on " << data.windows.size() << " windows, "
        << model.parameter_count() << " parameters" << std::endl;
    train(model, data, tc);

    auto& c = man.config();
    c["variant"] = variant_name(v);
    c["grid_cells"] = a.grid.cells;
    c["cell_size"] = a.grid.cell_size;
    c["epochs"] = a.epochs;
    c["wide"] = mo.backbone.wide;
    c["narrow"] = mo.backbone.narrow;
    c["depth"] = mo.backbone.depth;
    c["branch_convs"] = a.branch_convs;
    c["window_stride"] = a.stride;
    c["batch_size"] = a.batch;
    c["lr_min"] = a.lr_min;
    c["lr_max"] = a.lr_max;
    c["gamma"] = a.gamma;
    man.set_seed(a.seed);
    man.add_output(a.out);
    const json m = man.finish();
    if (fs::path(a.out).has_parent_path()) fs::create_directories(fs::path(a.out).parent_path());
    save_model(a.out, model, json{{"manifest", m}}.dump());
    write_text(a.out + ".manifest.json", m.dump(2) + "\n");
    out << "saved " << a.out << "\n";
    return kExitOk;
}

// ---------------------------------------------------------------- infer

struct InferArgs {
    std::string ckpt;
    std::string data;
    std::string out;
    int stride = 1;
    int threads = 0;
};

int cmd_infer(const InferArgs& a, RunManifest& man, std::ostream& out) {
    set_threads(a.threads);
    const Model model = load_model(a.ckpt);
    const Dataset data = load_windows(a.data, a.stride);
    man.add_input(a.ckpt);
    man.add_input(a.data);

    std::ostringstream os;
    std::size_t records = 0;
    for (std::size_t w = 0; w < data.windows.size(); ++w) {
        const auto& win = data.windows[w];
        const DualPrediction p = infer(model, win);
        for (std::size_t i = 0; i < win.points.size(); ++i) {
            if (!win.points[i].is_latest_scan) continue;
            const auto& d = win.points[i].detection;
            const auto& pp = p.points[i];
            json r{{"window", w},
                   {"sensor_id", d.sensor_id},
                   {"timestamp", d.timestamp},
                   {"index", i},
                   {"in_map", pp.in_map},
                   {"removed", pp.removed}};
            r["clutter"] = pp.clutter ? json(to_string(*pp.clutter)) : json(nullptr);
            r["semseg"] = pp.removed ? json(to_string(SemSegLabel::Background))
                          : pp.semseg ? json(to_string(*pp.semseg))
                                      : json(nullptr);
            if (pp.fused) r["fused"] = to_string(*pp.fused);
            os << r.dump() << '\n';
            ++records;
        }
    }
    write_text(a.out, os.str());
    man.add_output(a.out);
    man.config()["window_stride"] = a.stride;
    man.set_seed(model.seed);
    write_text(a.out + ".manifest.json", man.finish().dump(2) + "\n");
    out << "wrote " << records << " predictions to " << a.out << "\n";
    return kExitOk;
}

// ---------------------------------------------------------------- eval

struct EvalArgs {
    std::vector<std::string> ckpts;
    std::string data;
    std::string out;
    int stride = 1;
    int threads = 0;
};

int cmd_eval(const EvalArgs& a, RunManifest& man, std::ostream& out) {
    set_threads(a.threads);
    const Dataset data = load_windows(a.data, a.stride);
    man.add_input(a.data);
    const fs::path dir(a.out);
    fs::create_directories(dir);

    json models = json::array();
    std::vector<std::pair<std::string, MetricsReport>> summary;
    for (const auto& ck : a.ckpts) {
        const Model model = load_model(ck);
        man.add_input(ck);
        std::vector<DualPrediction> preds;
        preds.reserve(data.windows.size());
        for (const auto& w : data.windows) preds.push_back(infer(model, w));
        const std::string vname(variant_name(model.variant));
        json entry{{"variant", vname}, {"checkpoint", ck}, {"windows", data.windows.size()}};
        for (EvalTask t : eval_tasks(model.variant)) {
            const auto r = compute_metrics(data.windows, preds, t, fused_prediction_classes(model.variant));
            const std::string tname(eval_task_name(t));
            entry[tname] = json::parse(metrics_json(r));
            const std::string stem = vname + "_" + tname;
            write_text(dir / (stem + "_metrics.csv"), metrics_csv(r));
            write_text(dir / (stem + "_confusion.csv"), confusion_csv(r.confusion));
            man.add_output(dir / (stem + "_metrics.csv"));
            man.add_output(dir / (stem + "_confusion.csv"));
            out << std::left << std::setw(22) << vname << std::setw(9) << tname << " macro F1 " << std::fixed
                << std::setprecision(2) << 100.0 * r.macro_f1 << "  (P " << 100.0 * r.macro_precision << ", R "
                << 100.0 * r.macro_recall << ", n=" << r.samples << ")\n";
            summary.emplace_back(vname, r);
        }
        models.push_back(entry);
    }
    write_text(dir / "summary.csv", summary_csv(summary));
    man.add_output(dir / "summary.csv");
    man.add_output(dir / "report.json");
    man.config()["window_stride"] = a.stride;
    json report{{"models", models}};
    report["manifest"] = man.finish();
    write_text(dir / "report.json", report.dump(2) + "\n");
    return kExitOk;
}

// ---------------------------------------------------------------- bench

struct BenchArgs {
    std::string variants = "single_task,multi_head,series,label_fusion";
    std::vector<std::string> ckpts;
    std::string data;
    std::string out;
    GridOpts grid;
    int wide = 64;
    int narrow = 32;
    int branch_convs = 1;
    int repeats = 3;
    int warmup = 10;
    int stride = 1;
    std::uint64_t seed = 1;
};

int cmd_bench(const BenchArgs& a, RunManifest& man, std::ostream& out) {
    std::vector<Model> models;
    if (!a.ckpts.empty()) {
        for (const auto& ck : a.ckpts) {
            models.push_back(load_model(ck));
            man.add_input(ck);
        }
    } else {
        ModelOptions mo;
        mo.grid = GridConfig::square(a.grid.cells, a.grid.cell_size);
        mo.backbone.wide = a.wide;
        mo.backbone.narrow = a.narrow;
        mo.backbone.deconv_channels = a.narrow;
        mo.branch_convs = a.branch_convs;
        mo.seed = a.seed;
        for (const auto& name : split_csv(a.variants)) {
            Model m = build_model(require_variant(name), mo);
            // Latency does not depend on weight values.
            m.trained = true;
            models.push_back(std::move(m));
        }
    }
    if (models.empty()) throw InputError("no variants to benchmark");

    Dataset data;
    if (!a.data.empty()) {
        data = load_windows(a.data, a.stride);
        man.add_input(a.data);
    } else {
        SceneConfig scene;
        scene.rng_seed = a.seed;
        scene.duration_s = 1.0;
        const auto seq = generate_sequence(scene);
        std::vector<std::vector<Scan>> one{seq.scans};
        data = make_dataset(one, a.stride);
    }

    std::vector<const Model*> ptrs;
    for (const auto& m : models) ptrs.push_back(&m);
    const LatencyReport rep = benchmark_variants(ptrs, data.windows, a.repeats, a.warmup);
    out << std::left << std::setw(22) << "variant" << std::right << std::setw(11) << "mean [ms]" << std::setw(13)
        << "median [ms]" << std::setw(10) << "p99 [ms]" << std::setw(8) << "ratio" << "\n";
    for (const auto& r : rep.rows)
        out << std::left << std::setw(22) << r.variant << std::right << std::fixed << std::setprecision(3)
            << std::setw(11) << r.mean_ms << std::setw(13) << r.median_ms << std::setw(10) << r.p99_ms
            << std::setw(8) << std::setprecision(2) << r.ratio << "\n";
    if (!a.out.empty()) {
        auto& c = man.config();
        c["variants"] = a.variants;
        c["repeats"] = a.repeats;
        c["warmup"] = a.warmup;
        c["grid_cells"] = a.grid.cells;
        c["wide"] = a.wide;
        c["narrow"] = a.narrow;
        man.set_seed(a.seed);
        man.add_output(a.out);
        json j = json::parse(latency_json(rep));
        j["manifest"] = man.finish();
        write_text(a.out, j.dump(2) + "\n");
    }
    return kExitOk;
}

// ---------------------------------------------------------------- viz

struct VizArgs {
    std::string report;
    std::string ckpt;
    std::string data;
    std::string out;
    int window = 0;
};

ConfusionMatrix confusion_from_json(const json& c) {
    ConfusionMatrix cm;
    cm.row_names = c.at("rows").get<std::vector<std::string>>();
    cm.col_names = c.at("cols").get<std::vector<std::string>>();
    cm.counts = c.at("counts").get<std::vector<std::int64_t>>();
    for (std::size_t i = 0; i < cm.row_names.size(); ++i) cm.row_ids.push_back(static_cast<int>(i));
    for (std::size_t i = 0; i < cm.col_names.size(); ++i) cm.col_ids.push_back(static_cast<int>(i));
    if (cm.counts.size() != cm.rows() * cm.cols()) throw InputError("confusion matrix size mismatch");
    return cm;
}

int cmd_viz(const VizArgs& a, RunManifest& man, std::ostream& out) {
    if (a.report.empty() == a.ckpt.empty()) throw InputError("viz needs exactly one of --report or --ckpt");
    if (!a.report.empty()) {
        const json rep = read_json(a.report);
        man.add_input(a.report);
        const fs::path dir(a.out);
        fs::create_directories(dir);
        int n = 0;
        try {
            for (const auto& m : rep.at("models")) {
                const std::string v = m.at("variant").get<std::string>();
                for (const char* task : {"clutter", "semseg", "fused"}) {
                    if (!m.contains(task)) continue;
                    const auto cm = confusion_from_json(m.at(task).at("confusion"));
                    const fs::path p = dir / (v + "_" + task + "_confusion.svg");
                    write_text(p, confusion_svg(cm, v + " / " + task));
                    man.add_output(p);
                    ++n;
                }
            }
        } catch (const json::exception& e) {
            throw InputError(std::string("report: ") + e.what());
        }
        write_text(dir / "viz.manifest.json", man.finish().dump(2) + "\n");
        out << "wrote " << n << " heatmaps to " << dir.string() << "\n";
        return kExitOk;
    }

    if (a.data.empty()) throw InputError("viz --ckpt needs --data");
    const Model model = load_model(a.ckpt);
    const Dataset data = load_windows(a.data, 1);
    if (a.window < 0 || static_cast<std::size_t>(a.window) >= data.windows.size())
        throw InputError("--window out of range (0.." + std::to_string(data.windows.size() - 1) + ")");
    const auto& win = data.windows[static_cast<std::size_t>(a.window)];
    const GridMap grid = rasterize(win, model.grid);
    const DualPrediction p = infer(model, win);
    // Color each occupied cell by the prediction of its first detection.
    const bool semseg = model.variant != Variant::SingleTaskClutter;
    std::vector<int> cls(static_cast<std::size_t>(grid.config.cells()), -1);
    std::vector<std::string> names;
    if (semseg) {
        for (SemSegLabel l : kAllSemSegLabels) names.emplace_back(to_string(l));
    } else {
        for (ClutterLabel l : kAllClutterLabels) names.emplace_back(to_string(l));
    }
    for (std::size_t i = 0; i < win.points.size(); ++i) {
        const int c = grid.point_cell[i];
        if (c < 0 || cls[static_cast<std::size_t>(c)] >= 0) continue;
        const auto& pp = p.points[i];
        if (semseg && (pp.semseg || pp.removed))
            cls[static_cast<std::size_t>(c)] =
                static_cast<int>(pp.removed ? SemSegLabel::Background : *pp.semseg);
        else if (!semseg && pp.clutter)
            cls[static_cast<std::size_t>(c)] = static_cast<int>(*pp.clutter);
    }
    write_text(a.out, grid_svg(grid, cls, names,
                               std::string(variant_name(model.variant)) + " window " + std::to_string(a.window)));
    man.add_input(a.ckpt);
    man.add_input(a.data);
    man.add_output(a.out);
    write_text(a.out + ".manifest.json", man.finish().dump(2) + "\n");
    out << "wrote " << a.out << "\n";
    return kExitOk;
}

}  // namespace

int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
    CLI::App app{"radarseg: radar point cloud segmentation workflow"};
    app.name("radarseg");
    app.require_subcommand(1);

    GenArgs gen;
    std::uint64_t gen_seed = 0;
    int gen_sequences = 0;
    auto* g = app.add_subcommand("gen", "generate a labeled synthetic dataset");
    g->add_option("--config", gen.config, "key = value scene file")->check(CLI::ExistingFile);
    g->add_option("--out", gen.out, "output directory")->required();
    auto* g_seed = g->add_option("--seed", gen_seed, "base seed (overrides the config)");
    auto* g_seq = g->add_option("--sequences", gen_sequences, "sequence count (overrides the config)");
    int gen_test = 0;
    auto* g_test = g->add_option("--test-sequences", gen_test, "held-out sequence count (overrides the config)");

    TrainArgs tr;
    auto* t = app.add_subcommand("train", "train a model variant");
    t->add_option("--variant", tr.variant, "variant name")->required();
    t->add_option("--data", tr.data, "JSONL file or directory")->required()->check(CLI::ExistingPath);
    t->add_option("--out", tr.out, "checkpoint path")->required();
    t->add_option("--front", tr.front, "trained single_task_clutter checkpoint (series only)")
        ->check(CLI::ExistingFile);
    add_grid_options(t, tr.grid);
    t->add_option("--epochs", tr.epochs)->check(CLI::NonNegativeNumber);
    t->add_option("--seed", tr.seed);
    t->add_option("--wide", tr.wide)->check(CLI::PositiveNumber);
    t->add_option("--narrow", tr.narrow)->check(CLI::PositiveNumber);
    t->add_option("--depth", tr.depth)->check(CLI::PositiveNumber);
    t->add_option("--branch-convs", tr.branch_convs)->check(CLI::NonNegativeNumber);
    t->add_option("--window-stride", tr.stride)->check(CLI::PositiveNumber);
    t->add_option("--batch-size", tr.batch)->check(CLI::PositiveNumber);
    t->add_option("--lr-min", tr.lr_min)->check(CLI::PositiveNumber);
    t->add_option("--lr-max", tr.lr_max)->check(CLI::PositiveNumber);
    t->add_option("--gamma", tr.gamma)->check(CLI::NonNegativeNumber);
    t->add_option("--threads", tr.threads);

    InferArgs inf;
    std::uint64_t unused_seed = 0;
    auto* i = app.add_subcommand("infer", "write per-detection predictions");
    i->add_option("--ckpt", inf.ckpt)->required()->check(CLI::ExistingFile);
    i->add_option("--data", inf.data)->required()->check(CLI::ExistingPath);
    i->add_option("--out", inf.out, "JSONL output")->required();
    i->add_option("--window-stride", inf.stride)->check(CLI::PositiveNumber);
    i->add_option("--threads", inf.threads);
    i->add_option("--seed", unused_seed, "accepted for uniformity; inference is deterministic");

    EvalArgs ev;
    auto* e = app.add_subcommand("eval", "metrics report for one or more checkpoints");
    e->add_option("--ckpt", ev.ckpts, "checkpoint (repeatable)")->required()->check(CLI::ExistingFile);
    e->add_option("--data", ev.data)->required()->check(CLI::ExistingPath);
    e->add_option("--out", ev.out, "report directory")->required();
    e->add_option("--window-stride", ev.stride)->check(CLI::PositiveNumber);
    e->add_option("--threads", ev.threads);
    e->add_option("--seed", unused_seed, "accepted for uniformity; evaluation is deterministic");

    BenchArgs be;
    auto* b = app.add_subcommand("bench", "inference latency per variant");
    b->add_option("--variants", be.variants, "comma-separated variant names");
    b->add_option("--ckpt", be.ckpts, "benchmark these checkpoints instead (repeatable)")->check(CLI::ExistingFile);
    b->add_option("--data", be.data, "windows to time (default: one generated sequence)")
        ->check(CLI::ExistingPath);
    b->add_option("--out", be.out, "JSON output");
    add_grid_options(b, be.grid);
    b->add_option("--wide", be.wide)->check(CLI::PositiveNumber);
    b->add_option("--narrow", be.narrow)->check(CLI::PositiveNumber);
    b->add_option("--branch-convs", be.branch_convs)->check(CLI::NonNegativeNumber);
    b->add_option("--repeats", be.repeats)->check(CLI::PositiveNumber);
    b->add_option("--warmup", be.warmup)->check(CLI::NonNegativeNumber);
    b->add_option("--window-stride", be.stride)->check(CLI::PositiveNumber);
    b->add_option("--seed", be.seed);
    int bench_threads = 0;
    b->add_option("--threads", bench_threads, "ignored: timing always uses one worker");

    VizArgs vz;
    auto* z = app.add_subcommand("viz", "SVG confusion heatmaps or a predicted grid");
    z->add_option("--report", vz.report, "report.json from eval")->check(CLI::ExistingFile);
    z->add_option("--ckpt", vz.ckpt)->check(CLI::ExistingFile);
    z->add_option("--data", vz.data)->check(CLI::ExistingPath);
    z->add_option("--window", vz.window);
    z->add_option("--out", vz.out, "directory (--report) or SVG file (--ckpt)")->required();
    z->add_option("--seed", unused_seed, "accepted for uniformity");

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp&) {
        out << app.help();
        return kExitOk;
    } catch (const CLI::CallForAllHelp&) {
        out << app.help("", CLI::AppFormatMode::All);
        return kExitOk;
    } catch (const CLI::ParseError& ex) {
        err << "error: " << ex.what() << "\n\n";
        const CLI::App* sub = app.get_subcommands().empty() ? &app : app.get_subcommands().front();
        err << sub->help();
        return kExitUser;
    }

    CLI::App* sub = app.get_subcommands().front();
    RunManifest man(sub->get_name(), argc, argv);
    try {
        if (sub == g) {
            if (g_seed->count()) gen.seed = gen_seed;
            if (g_seq->count()) gen.sequences = gen_sequences;
            if (g_test->count()) gen.test_sequences = gen_test;
            return cmd_gen(gen, man, out);
        }
        if (sub == t) return cmd_train(tr, man, out);
        if (sub == i) return cmd_infer(inf, man, out);
        if (sub == e) return cmd_eval(ev, man, out);
        if (sub == b) return cmd_bench(be, man, out);
        if (sub == z) return cmd_viz(vz, man, out);
    } catch (const InputError& ex) {
        err << "error: " << ex.what() << "\n";
        return kExitUser;
    } catch (const fs::filesystem_error& ex) {
        err << "error: " << ex.what() << "\n";
        return kExitUser;
    } catch (const std::exception& ex) {
        err << "internal error: " << ex.what() << "\n";
        return kExitInternal;
    }
    return kExitInternal;
}

}  // namespace radarseg::cli
