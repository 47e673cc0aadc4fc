#include <chrono>
#include <fstream>
#include <iomanip>
#include <iostream>
#include <optional>

#include "CLI11.hpp"
#include "incsp/inc_apsp.hpp"
#include "incsp/instance_gen.hpp"
#include "incsp/io.hpp"
#include "incsp/offline_sssp.hpp"
#include "incsp/verify.hpp"

namespace {

using namespace incsp;

std::ostream& open_out(std::ofstream& file, const std::string& path) {
    if (path.empty()) return std::cout;
    file.open(path);
    if (!file) throw std::invalid_argument("cannot open output file: " + path);
    return file;
}

void print_value(std::ostream& os, double v) {
    if (std::isfinite(v)) {
        os << std::setprecision(17) << v;
    } else {
        os << "inf";
    }
}

struct CsvWriter {
    std::ofstream file;
    bool enabled = false;
    std::chrono::steady_clock::time_point start;

    void open(const std::string& path) {
        if (path.empty()) return;
        file.open(path);
        if (!file) throw std::invalid_argument("cannot open csv file: " + path);
        enabled = true;
        start = std::chrono::steady_clock::now();
        file << "updates_applied,queue_pops,pushes,edge_scans,rank_increases,"
                "shortcut_decreases,wall_time_ns\n";
    }
    void row(std::uint64_t updates, std::uint64_t pops, std::uint64_t pushes,
             std::uint64_t scans, std::uint64_t rank_inc, std::uint64_t shortcut_dec) {
        if (!enabled) return;
        auto ns = std::chrono::duration_cast<std::chrono::nanoseconds>(
                      std::chrono::steady_clock::now() - start)
                      .count();
        file << updates << "," << pops << "," << pushes << "," << scans << "," << rank_inc << ","
             << shortcut_dec << "," << ns << "\n";
    }
};

int cmd_gen(const std::string& out_path, std::size_t n, std::size_t m, std::size_t updates,
            double w_max, std::uint64_t seed, std::size_t queries, const std::string& workload) {
    GenParams p;
    p.n = n;
    p.m0 = m;
    p.w_max = w_max;
    p.n_updates = updates;
    p.seed = seed;
    p.kind = workload == "source" ? WorkloadKind::source_only : WorkloadKind::general;
    RandomInstance ri = generate_random_sequence(p);

    Instance inst;
    inst.n = n;
    for (const EdgeRecord& e : ri.graph.edges()) {
        inst.initial_edges.push_back({e.tail, e.head, e.current_weight()});
    }
    for (const Update& u : ri.updates.updates) inst.items.emplace_back(u);

    // Interleave query markers deterministically among the updates.
    if (queries > 0) {
        std::mt19937_64 rng(seed ^ 0x9e3779b97f4a7c15ull);
        std::uniform_int_distribution<std::size_t> pos(0, inst.items.size());
        std::uniform_int_distribution<VertexId> pick(0, static_cast<VertexId>(n - 1));
        std::uniform_int_distribution<std::uint32_t> pick_t(
            0, static_cast<std::uint32_t>(updates));
        std::vector<std::pair<std::size_t, InstanceItem>> marks;
        for (std::size_t i = 0; i < queries; ++i) {
            InstanceItem item;
            if (workload == "source") {
                item = QuerySssp{pick(rng)};
            } else if (workload == "offline") {
                item = QueryOffline{pick(rng), pick_t(rng)};
            } else {
                item = QueryPair{pick(rng), pick(rng)};
            }
            marks.emplace_back(pos(rng), item);
        }
        std::stable_sort(marks.begin(), marks.end(),
                         [](const auto& a, const auto& b) { return a.first < b.first; });
        std::vector<InstanceItem> merged;
        std::size_t mi = 0;
        for (std::size_t i = 0; i <= inst.items.size(); ++i) {
            while (mi < marks.size() && marks[mi].first == i) merged.push_back(marks[mi++].second);
            if (i < inst.items.size()) merged.push_back(inst.items[i]);
        }
        inst.items = std::move(merged);
    }

    std::ofstream file;
    std::ostream& os = open_out(file, out_path);
    write_instance(os, inst);
    return 0;
}

int cmd_run_sssp(const std::string& in, const std::string& out_path, double eps,
                 const std::string& csv_path, std::size_t csv_every, bool answer_queries) {
    Instance inst = load_instance(in);
    std::ofstream file;
    std::ostream& os = open_out(file, out_path);
    CsvWriter csv;
    csv.open(csv_path);

    double xi = xi_for_epsilon(eps, inst.final_edge_count());
    auto base = std::make_shared<DynGraph>(inst.build_initial_graph());
    DynGraph replica = inst.build_initial_graph();
    SourceSSSP s(base, 0, xi, inst.max_weight());

    std::uint64_t updates = 0;
    auto emit_csv = [&]() {
        csv.row(updates, s.stats().pops, s.stats().pushes, s.stats().edge_scans,
                s.counters().rank_increase_total, s.counters().shortcut_weight_drops);
    };
    for (const InstanceItem& item : inst.items) {
        if (const Update* u = std::get_if<Update>(&item)) {
            if (u->tail != 0) {
                throw std::invalid_argument("run-sssp requires source-incident updates");
            }
            replica.apply(*u);  // validates the update
            s.source_insert(u->head, u->weight);
            ++updates;
            if (csv_every > 0 && updates % csv_every == 0) emit_csv();
        } else if (const QuerySssp* q = std::get_if<QuerySssp>(&item)) {
            if (!answer_queries) continue;
            os << q->v << " ";
            print_value(os, s.estimate(q->v));
            os << "\n";
        }
    }
    emit_csv();
    return 0;
}

int cmd_run_apsp(const std::string& in, const std::string& out_path, double eps,
                 const std::string& variant, std::uint64_t seed, const std::string& csv_path,
                 std::size_t csv_every, bool answer_queries) {
    Instance inst = load_instance(in);
    std::ofstream file;
    std::ostream& os = open_out(file, out_path);
    CsvWriter csv;
    csv.open(csv_path);

    DynGraph g0 = inst.build_initial_graph();
    DynGraph replica = inst.build_initial_graph();
    IncAPSP x(g0, eps,
              variant == "rand" ? ApspVariant::randomized : ApspVariant::deterministic, seed,
              inst.max_weight(), inst.final_edge_count());

    std::uint64_t updates = 0;
    auto emit_csv = [&]() {
        auto t = x.work_totals();
        csv.row(updates, t.pops, t.pushes, t.edge_scans, t.rank_increases, t.shortcut_decreases);
    };
    for (const InstanceItem& item : inst.items) {
        if (const Update* u = std::get_if<Update>(&item)) {
            replica.apply(*u);  // validates the update
            x.update(*u);
            ++updates;
            if (csv_every > 0 && updates % csv_every == 0) emit_csv();
        } else if (const QueryPair* q = std::get_if<QueryPair>(&item)) {
            if (!answer_queries) continue;
            os << q->u << " " << q->v << " ";
            print_value(os, x.query(q->u, q->v));
            os << "\n";
        }
    }
    emit_csv();
    return 0;
}

int cmd_run_offline(const std::string& in, const std::string& out_path, double eps,
                    const std::string& save_index, const std::string& load_index,
                    const std::string& csv_path, bool answer_queries) {
    std::ofstream file;
    std::ostream& os = open_out(file, out_path);
    CsvWriter csv;
    csv.open(csv_path);

    std::optional<OfflineSSSP> off;
    Instance inst;
    if (!load_index.empty()) {
        std::ifstream idx(load_index);
        if (!idx) throw std::invalid_argument("cannot open index: " + load_index);
        off.emplace(OfflineSSSP::load(idx));
        if (!in.empty()) inst = load_instance(in);
    } else {
        inst = load_instance(in);
        DynGraph g0 = inst.build_initial_graph();
        off.emplace(g0, inst.updates_only(), 0, eps, inst.max_weight());
    }
    if (!save_index.empty()) {
        std::ofstream idx(save_index);
        if (!idx) throw std::invalid_argument("cannot open index for write: " + save_index);
        off->save(idx);
    }
    for (const InstanceItem& item : inst.items) {
        if (const QueryOffline* q = std::get_if<QueryOffline>(&item)) {
            if (!answer_queries) continue;
            std::uint32_t t = std::min<std::uint32_t>(q->t, off->delta());
            os << q->v << " " << t << " ";
            print_value(os, off->query(q->v, t));
            os << "\n";
        }
    }
    csv.row(off->delta(), off->dijkstra_pops(), 0, 0, 0, 0);
    return 0;
}

int cmd_verify(const std::string& structure, const std::string& in, const std::string& out_path,
               double eps, const std::string& variant, std::uint64_t seed,
               std::size_t check_every) {
    Instance inst = load_instance(in);
    VerifyOptions opt;
    opt.eps = eps;
    opt.variant = variant == "rand" ? ApspVariant::randomized : ApspVariant::deterministic;
    opt.seed = seed;
    opt.check_every = check_every;

    OracleReport rep;
    if (structure == "sssp") {
        rep = verify_sssp_replay(inst, opt);
    } else if (structure == "apsp") {
        rep = verify_apsp_replay(inst, opt);
    } else if (structure == "offline") {
        rep = verify_offline(inst, opt);
    } else {
        throw CLI::ValidationError("--structure must be sssp, apsp or offline");
    }
    std::ofstream file;
    std::ostream& os = open_out(file, out_path);
    rep.write_json_lines(os);
    return rep.ok() ? 0 : 2;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Incremental and offline approximate shortest-path structures"};
    app.require_subcommand(1);

    // gen
    auto* gen = app.add_subcommand("gen", "Generate a random instance file");
    std::size_t g_n = 16, g_m = 32, g_updates = 64, g_queries = 0;
    double g_w = 10.0;
    std::uint64_t g_seed = 1;
    std::string g_out, g_workload = "general";
    gen->add_option("--n", g_n, "vertex count");
    gen->add_option("--m", g_m, "initial edge count");
    gen->add_option("--updates", g_updates, "number of updates");
    gen->add_option("--w-max", g_w, "maximum weight W");
    gen->add_option("--seed", g_seed, "random seed");
    gen->add_option("--queries", g_queries, "query markers to embed");
    gen->add_option("--workload", g_workload, "general | source | offline")
        ->check(CLI::IsMember({"general", "source", "offline"}));
    gen->add_option("--out", g_out, "output path (default stdout)");

    // shared run/verify options
    std::string in, out, variant = "det", csv, structure = "sssp";
    double eps = 0.5;
    std::uint64_t seed = 1;
    std::size_t check_every = 1, csv_every = 0;

    auto add_common = [&](CLI::App* c, bool with_variant) {
        c->add_option("--in", in, "instance file")->required();
        c->add_option("--out", out, "answers / report output (default stdout)");
        c->add_option("--epsilon", eps, "approximation parameter in (0,1)");
        if (with_variant) {
            c->add_option("--variant", variant, "det | rand")
                ->check(CLI::IsMember({"det", "rand"}));
            c->add_option("--seed", seed, "seed for the randomized variant");
        }
        c->add_option("--bench-csv", csv, "work-counter CSV output path");
    };

    auto* run_sssp = app.add_subcommand("run-sssp", "Replay a source-update instance");
    add_common(run_sssp, false);
    run_sssp->add_option("--csv-every", csv_every, "CSV row frequency in updates");

    auto* run_apsp = app.add_subcommand("run-apsp", "Replay an all-pairs instance");
    add_common(run_apsp, true);
    run_apsp->add_option("--csv-every", csv_every, "CSV row frequency in updates");

    auto* run_off = app.add_subcommand("run-offline", "Build the offline structure and answer");
    std::string save_index, load_index;
    add_common(run_off, false);
    run_off->add_option("--save-index", save_index, "serialize the built structure");
    run_off->add_option("--load-index", load_index, "load a serialized structure");
    run_off->get_option("--in")->required(false);

    auto* verify = app.add_subcommand("verify", "Replay with oracle checks (exit 2 on violation)");
    add_common(verify, true);
    verify->add_option("--structure", structure, "sssp | apsp | offline")
        ->check(CLI::IsMember({"sssp", "apsp", "offline"}));
    verify->add_option("--check-every", check_every, "updates between oracle checks");

    auto* bench = app.add_subcommand("bench", "Replay without answers, emitting work counters");
    add_common(bench, true);
    bench->add_option("--structure", structure, "sssp | apsp | offline")
        ->check(CLI::IsMember({"sssp", "apsp", "offline"}));
    bench->add_option("--csv-every", csv_every, "CSV row frequency in updates");

    try {
        app.parse(argc, argv);
        if (gen->parsed()) {
            return cmd_gen(g_out, g_n, g_m, g_updates, g_w, g_seed, g_queries, g_workload);
        }
        if (run_sssp->parsed()) return cmd_run_sssp(in, out, eps, csv, csv_every, true);
        if (run_apsp->parsed()) {
            return cmd_run_apsp(in, out, eps, variant, seed, csv, csv_every, true);
        }
        if (run_off->parsed()) {
            return cmd_run_offline(in, out, eps, save_index, load_index, csv, true);
        }
        if (verify->parsed()) {
            return cmd_verify(structure, in, out, eps, variant, seed, check_every);
        }
        if (bench->parsed()) {
            if (csv.empty()) throw CLI::ValidationError("bench requires --bench-csv");
            if (structure == "sssp") return cmd_run_sssp(in, out, eps, csv, csv_every, false);
            if (structure == "apsp") {
                return cmd_run_apsp(in, out, eps, variant, seed, csv, csv_every, false);
            }
            return cmd_run_offline(in, out, eps, "", "", csv, false);
        }
    } catch (const CLI::ParseError& e) {
        int code = app.exit(e);
        return code == 0 ? 0 : 1;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
    return 1;
}
