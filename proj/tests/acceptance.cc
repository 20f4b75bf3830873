// Acceptance run: one PASS/FAIL/SKIP line per criterion, exit 1 on any FAIL.
//
//   acceptance [--work DIR] [--realworld-dir DIR] [--only 4,5,...]
//
// Criteria 1-3 and 9 share two reproduce-table1 runs through the CLI; 10 runs
// `table2` on every manifest in --realworld-dir and is skipped without it.
#include <sys/wait.h>

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <functional>
#include <limits>
#include <map>
#include <optional>
#include <set>
#include <sstream>
#include <string>
#include <tuple>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"

#include "dgx/datagen.h"
#include "dgx/eval.h"
#include "dgx/explain.h"
#include "dgx/nn/gcn.h"
#include "dgx/nn/train.h"
#include "dgx/preprocess.h"
#include "dgx/error.h"
#include "dgx/rng.h"

namespace fs = std::filesystem;

namespace dgx {
namespace {

enum class Verdict { kPass, kFail, kSkip };

struct Outcome {
  Verdict verdict = Verdict::kFail;
  std::string detail;
};

const char* VerdictName(Verdict v) {
  switch (v) {
    case Verdict::kPass: return "PASS";
    case Verdict::kFail: return "FAIL";
    case Verdict::kSkip: return "SKIP";
  }
  return "?";
}

Outcome Judge(bool ok, std::string detail) {
  return {ok ? Verdict::kPass : Verdict::kFail, std::move(detail)};
}

std::string Fmt(const char* format, double x) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), format, x);
  return buf;
}

double Seconds(std::chrono::steady_clock::time_point since) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - since).count();
}

std::string Slurp(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

int Shell(const std::string& cmd) {
  const int status = std::system(cmd.c_str());
  return WIFEXITED(status) ? WEXITSTATUS(status) : -1;
}

double RelativeError(double analytic, double numeric) {
  return std::abs(analytic - numeric) / std::max({std::abs(analytic), std::abs(numeric), 1e-6});
}

// ---- 1-3, 9: Table 1 ---------------------------------------------------------

struct Table1Runs {
  bool ran = false;
  int exit_a = -1;
  int exit_b = -1;
  double seconds_a = 0.0;
  double seconds_b = 0.0;
  fs::path dir_a;
  fs::path dir_b;
  nlohmann::json report;
};

Table1Runs RunTable1Twice(const fs::path& work) {
  Table1Runs r;
  r.ran = true;
  r.dir_a = work / "table1_a";
  r.dir_b = work / "table1_b";
  for (auto [dir, exit, secs] : {std::tuple{r.dir_a, &r.exit_a, &r.seconds_a},
                                 std::tuple{r.dir_b, &r.exit_b, &r.seconds_b}}) {
    fs::remove_all(dir);
    fs::create_directories(dir);
    const auto t0 = std::chrono::steady_clock::now();
    *exit = Shell(std::string("'") + DGX_CLI_PATH + "' reproduce-table1 --seeds 0,1,2 --jobs 1 --out '" +
                  dir.string() + "' >'" + (dir / "stdout.txt").string() + "'");
    *secs = Seconds(t0);
    std::printf("  reproduce-table1 -> %s: exit %d, %.0f s\n", dir.c_str(), *exit, *secs);
    std::fflush(stdout);
  }
  if (r.exit_a == 0) r.report = nlohmann::json::parse(Slurp(r.dir_a / "table1.json"));
  return r;
}

// Mean over seeds of the per-seed AUC, straight from the report's cells.
std::map<std::string, double> SeedMeans(const nlohmann::json& report) {
  std::map<std::string, std::pair<double, int>> acc;
  for (const auto& c : report.at("cells")) {
    if (c.at("auc").is_null()) continue;
    const std::string key = c.at("dataset").get<std::string>() + "/" +
                            c.at("explainer").get<std::string>() + "/" +
                            c.at("pipeline").get<std::string>();
    acc[key].first += c.at("auc").get<double>();
    acc[key].second += 1;
  }
  std::map<std::string, double> means;
  for (const auto& [k, v] : acc) means[k] = v.first / v.second;
  return means;
}

std::optional<double> Lookup(const std::map<std::string, double>& m, const std::string& ds,
                             const std::string& ex, const std::string& p) {
  const auto it = m.find(ds + "/" + ex + "/" + p);
  if (it == m.end()) return std::nullopt;
  return it->second;
}

Outcome Directionality(const Table1Runs& t) {
  if (t.exit_a != 0) return {Verdict::kFail, "reproduce-table1 exited " + std::to_string(t.exit_a)};
  const auto m = SeedMeans(t.report);
  bool ok = true;
  std::string detail;
  for (const char* ds : {"dilink_motif", "dilink_base"}) {
    for (const char* ex : {"gnn", "pg"}) {
      const auto b = Lookup(m, ds, ex, "symm");
      const auto l = Lookup(m, ds, ex, "lapnorm");
      const bool cell = b && l && *l - *b >= 0.05;
      ok = ok && cell;
      detail += std::string(ds) + "/" + ex + " B=" + (b ? Fmt("%.3f", *b) : "n/a") +
                " L=" + (l ? Fmt("%.3f", *l) : "n/a") + (cell ? "" : " (short)") + "; ";
    }
  }
  return Judge(ok, detail);
}

Outcome Parity(const Table1Runs& t) {
  if (t.exit_a != 0) return {Verdict::kFail, "reproduce-table1 exited " + std::to_string(t.exit_a)};
  const auto m = SeedMeans(t.report);
  bool ok = true;
  std::string detail;
  for (const char* ds : {"ba_shapes", "ba_community", "tree_cycles", "tree_grid"}) {
    for (const char* ex : {"gnn", "pg"}) {
      const auto b = Lookup(m, ds, ex, "symm");
      const auto l = Lookup(m, ds, ex, "lapnorm");
      const bool cell = b && l && std::abs(*l - *b) <= 0.05;
      ok = ok && cell;
      detail += std::string(ds) + "/" + ex + " |L-B|=" +
                (b && l ? Fmt("%.3f", std::abs(*l - *b)) : "n/a") + (cell ? "" : " (over)") + "; ";
    }
  }
  return Judge(ok, detail);
}

Outcome Floor(const Table1Runs& t) {
  if (t.exit_a != 0) return {Verdict::kFail, "reproduce-table1 exited " + std::to_string(t.exit_a)};
  const auto m = SeedMeans(t.report);
  bool ok = true;
  std::string detail;
  for (const char* ds : {"ba_shapes", "tree_cycles"}) {
    for (const char* ex : {"gnn", "pg"}) {
      const double floor = std::string(ex) == "pg" ? 0.85 : 0.80;
      for (const char* p : {"symm", "lapnorm"}) {
        const auto a = Lookup(m, ds, ex, p);
        const bool cell = a && *a >= floor;
        ok = ok && cell;
        detail += std::string(ds) + "/" + ex + "/" + p + "=" + (a ? Fmt("%.3f", *a) : "n/a") +
                  (cell ? "" : " (low)") + "; ";
      }
    }
  }
  return Judge(ok, detail);
}

Outcome Determinism(const Table1Runs& t) {
  if (t.exit_a != 0 || t.exit_b != 0) {
    return {Verdict::kFail, "exits " + std::to_string(t.exit_a) + ", " + std::to_string(t.exit_b)};
  }
  bool ok = true;
  std::string detail;
  for (const char* f : {"table1.json", "table1_seeds.csv", "table1.txt"}) {
    const std::string a = Slurp(t.dir_a / f);
    const bool same = !a.empty() && a == Slurp(t.dir_b / f);
    ok = ok && same;
    detail += std::string(f) + (same ? " identical (" + std::to_string(a.size()) + " bytes); "
                                     : " DIFFERS; ");
  }
  detail += "runtimes " + Fmt("%.0f", t.seconds_a) + " s and " + Fmt("%.0f", t.seconds_b) + " s";
  return Judge(ok, detail);
}

// ---- 4: directional gain oracle ------------------------------------------------

Outcome Theorem1() {
  const auto t0 = std::chrono::steady_clock::now();
  const Theorem1Report r = RunTheorem1Suite(Theorem1Config{});
  const double secs = Seconds(t0);
  std::string violating;
  for (const Theorem1Instance& i : r.instances) {
    if (i.violation) violating += " " + std::to_string(i.seed) + (i.planted ? "p" : "");
  }
  const int total = r.random_instances + r.planted_instances;
  const bool ok = r.random_instances == 100 && r.planted_instances == 20 && r.PassRate() >= 0.95 &&
                  r.planted_strict == r.planted_instances && r.planted_violations == 0 &&
                  secs < 600.0;
  return Judge(ok, std::to_string(total - r.random_violations - r.planted_violations) + "/" +
                       std::to_string(total) + " pass (" + Fmt("%.3f", r.PassRate()) +
                       "), planted strict " + std::to_string(r.planted_strict) + "/" +
                       std::to_string(r.planted_instances) + ", violating seeds:" +
                       (violating.empty() ? " none" : violating) + ", " + Fmt("%.0f", secs) + " s");
}

// ---- 5: entropy ------------------------------------------------------------------

Outcome Entropy() {
  const EntropyReport r = RunEntropySuite(EntropySuiteConfig{});
  std::string violating;
  for (const EntropyRecord& e : r.records) {
    if (e.violation) violating += " " + e.name + "/" + std::to_string(e.seed) + "(" + Fmt("%+.4f", e.gap) + ")";
  }
  const bool directed_ok = r.records.size() == 56 && r.PassRate() >= 0.9;

  // Symmetric inputs at alpha = 1e-4: the datasets and random digraphs, symmetrized.
  std::vector<std::pair<std::string, DiGraph>> graphs;
  for (DatasetKind k : kAllDatasetKinds) {
    graphs.push_back({DatasetKindName(k), Symmetrize(Generate(SyntheticSpec::Defaults(k, 0)).graph)});
  }
  for (uint64_t s = 0; s < 50; ++s) {
    const int n = 4 + static_cast<int>(s % 17);
    graphs.push_back({"random_" + std::to_string(s), Symmetrize(RandomDigraph(n, 0.3, 1000 + s))});
  }
  double worst = 0.0;
  int within = 0;
  std::string outside;
  for (const auto& [name, g] : graphs) {
    try {
      const double gap = EntropyOf(g, name, 0, 1e-4, 1e-2).gap;
      worst = std::max(worst, std::abs(gap));
      if (std::abs(gap) < 1e-2) {
        ++within;
      } else {
        outside += " " + name + "(" + Fmt("%+.4f", gap) + ")";
      }
    } catch (const Error& e) {
      outside += " " + name + "(" + ErrorCodeName(e.code()) + ")";
    }
  }
  const bool symmetric_ok = within == static_cast<int>(graphs.size());
  return Judge(directed_ok && symmetric_ok,
               "alpha=0.1: " + std::to_string(r.records.size() - r.violations) + "/" +
                   std::to_string(r.records.size()) + " consistent, violations:" +
                   (violating.empty() ? " none" : violating) + "; symmetric alpha=1e-4: " +
                   std::to_string(within) + "/" + std::to_string(graphs.size()) +
                   " with |gap| < 1e-2, outside:" + (outside.empty() ? " none" : outside));
}

// ---- 6: gradients ------------------------------------------------------------------

Outcome Gradients() {
  const double eps = 1e-6;
  double worst[4] = {0, 0, 0, 0};  // weights, biases, mask logits, explainer net
  for (uint64_t seed = 0; seed < 20; ++seed) {
    const Provenance p = seed % 2 ? Provenance::kLapNorm : Provenance::kSymm;
    Rng rng = MakeRng(seed, "acceptance_gradients");
    const int n = 7;
    const DiGraph raw = RandomDigraph(n, 0.35, 500 + seed);
    Matrix features(n, 3);
    for (int i = 0; i < features.size(); ++i) features.data()[i] = StandardNormal(rng);
    std::vector<int> labels(n);
    for (int& y : labels) y = static_cast<int>(UniformIndex(rng, 3));
    const ProcessedGraph pg = Preprocess(DiGraph::FromEdgeList(n, raw.edges(), features, labels), p, 0.1);
    const nn::Tensor x = nn::ModelInput(pg.graph);
    nn::GcnModel model = nn::GcnModel::Initialize(3, 3, {.layers = 3, .hidden = 5}, seed);
    for (nn::GcnLayer& layer : model.mutable_layers()) {
      for (int j = 0; j < layer.bias.size(); ++j) layer.bias.data()[j] = 0.1 * StandardNormal(rng);
    }
    std::vector<double> logits(pg.graph.num_edges());
    for (double& l : logits) l = StandardNormal(rng);
    const std::vector<int> nodes{0, 1, 3, 6};
    auto loss_at = [&](const std::vector<double>& l) {
      return nn::ComputeLossAndGrads(model, pg.prop, x, labels, nodes, std::span<const double>(l)).loss;
    };
    const nn::LossAndGrads lg =
        nn::ComputeLossAndGrads(model, pg.prop, x, labels, nodes, std::span<const double>(logits));
    for (int layer = 0; layer < model.num_layers(); ++layer) {
      for (int bias = 0; bias < 2; ++bias) {
        nn::Tensor& param = bias ? model.mutable_layers()[layer].bias : model.mutable_layers()[layer].weight;
        const nn::Tensor& grad = bias ? lg.bias_grads[layer] : lg.weight_grads[layer];
        for (int i = 0; i < param.size(); ++i) {
          const double saved = param.data()[i];
          param.data()[i] = saved + eps;
          const double up = loss_at(logits);
          param.data()[i] = saved - eps;
          const double down = loss_at(logits);
          param.data()[i] = saved;
          worst[bias] = std::max(worst[bias], RelativeError(grad.data()[i], (up - down) / (2 * eps)));
        }
      }
    }
    for (size_t e = 0; e < logits.size(); ++e) {
      std::vector<double> l = logits;
      l[e] += eps;
      const double up = loss_at(l);
      l[e] -= 2 * eps;
      const double down = loss_at(l);
      worst[2] = std::max(worst[2], RelativeError(lg.mask_logit_grads(e), (up - down) / (2 * eps)));
    }

    // Explainer objectives on the first node with candidate edges.
    const ExplainContext ctx(model, pg);
    int v = 0;
    while (v < n && ctx.CandidateEdges(v).empty()) ++v;
    if (v == n) continue;
    const std::vector<int> cand = ctx.CandidateEdges(v);
    std::vector<double> mask_logits(cand.size());
    for (double& l : mask_logits) l = StandardNormal(rng);
    const ExplainerConfig gcfg = ExplainerConfig::Defaults(ExplainerKind::kGnn);
    const MaskObjective mo = GnnExplainerObjective(ctx, v, cand, mask_logits, gcfg);
    for (size_t i = 0; i < cand.size(); ++i) {
      std::vector<double> l = mask_logits;
      l[i] += eps;
      const double up = GnnExplainerObjective(ctx, v, cand, l, gcfg).loss;
      l[i] -= 2 * eps;
      const double down = GnnExplainerObjective(ctx, v, cand, l, gcfg).loss;
      worst[2] = std::max(worst[2], RelativeError(mo.grad(i), (up - down) / (2 * eps)));
    }

    PgExplainerNet net = PgExplainerNet::Initialize(model.hidden(), 6, seed);
    for (int j = 0; j < net.b1.size(); ++j) net.b1.data()[j] = 0.1 * StandardNormal(rng);
    const ExplainerConfig pcfg = ExplainerConfig::Defaults(ExplainerKind::kPg);
    std::vector<double> noise(cand.size());
    for (double& z : noise) z = StandardNormal(rng);
    const PgObjective po = PgExplainerObjective(net, ctx, v, noise, 2.0, pcfg);
    nn::Tensor* params[] = {&net.w1, &net.b1, &net.w2, &net.b2};
    for (int q = 0; q < 4; ++q) {
      for (Eigen::Index i = 0; i < params[q]->size(); ++i) {
        double& w = params[q]->data()[i];
        const double saved = w;
        w = saved + eps;
        const double up = PgExplainerObjective(net, ctx, v, noise, 2.0, pcfg).loss;
        w = saved - eps;
        const double down = PgExplainerObjective(net, ctx, v, noise, 2.0, pcfg).loss;
        w = saved;
        worst[3] = std::max(worst[3], RelativeError(po.grads[q].data()[i], (up - down) / (2 * eps)));
      }
    }
  }
  const double max = *std::max_element(std::begin(worst), std::end(worst));
  return Judge(max < 1e-4, "20 instances, max relative error: weights " + Fmt("%.1e", worst[0]) +
                               ", biases " + Fmt("%.1e", worst[1]) + ", mask logits " +
                               Fmt("%.1e", worst[2]) + ", explainer net " + Fmt("%.1e", worst[3]));
}

// ---- 7: AUC ------------------------------------------------------------------------

Outcome AucEquivalence() {
  Rng rng = MakeRng(7, "acceptance_auc");
  double worst = 0.0;
  int compared = 0;
  int tied_vectors = 0;
  for (int t = 0; t < 1000; ++t) {
    const int len = 2 + static_cast<int>(UniformIndex(rng, 60));
    const int levels = 1 + static_cast<int>(UniformIndex(rng, 8));  // few levels force ties
    std::vector<double> scores(len);
    std::vector<int> labels(len);
    for (int i = 0; i < len; ++i) {
      scores[i] = static_cast<double>(UniformIndex(rng, levels)) / levels;
      labels[i] = static_cast<int>(UniformIndex(rng, 2));
    }
    labels[0] = 1;
    labels[1] = 0;
    tied_vectors += std::set<double>(scores.begin(), scores.end()).size() < scores.size();
    double wins = 0.0;
    int pairs = 0;
    for (int i = 0; i < len; ++i) {
      if (!labels[i]) continue;
      for (int j = 0; j < len; ++j) {
        if (labels[j]) continue;
        wins += scores[i] > scores[j] ? 1.0 : scores[i] == scores[j] ? 0.5 : 0.0;
        ++pairs;
      }
    }
    const std::optional<double> auc = RankAuc(scores, labels);
    if (!auc) return {Verdict::kFail, "rank AUC undefined on vector " + std::to_string(t)};
    worst = std::max(worst, std::abs(*auc - wins / pairs));
    ++compared;
  }
  return Judge(compared == 1000 && worst <= 1e-12,
               std::to_string(compared) + " vectors (" + std::to_string(tied_vectors) +
                   " with ties), max |rank - pairs| = " + Fmt("%.1e", worst));
}

// ---- 8: metric identities ---------------------------------------------------------

Outcome MetricIdentities() {
  bool ok = Characterization(1.0, 0.0) == 1.0;
  std::string detail = "Char(1,0)=" + Fmt("%.17g", Characterization(1.0, 0.0));
  for (double fm : {0.0, 0.3, 1.0}) {
    for (double w : {0.2, 0.5, 0.9}) {
      ok = ok && Characterization(0.0, fm, w, 1.0 - w) == 0.0;
      ok = ok && Characterization(1.0, 0.0, w, 1.0 - w) == 1.0;
    }
  }
  detail += ", Char(0,.)=0 over 9 settings";

  // Full-graph explanation on a trained BA-Shapes model.
  const Dataset d = Generate(SyntheticSpec::Defaults(DatasetKind::kBaShapes, 0));
  double worst = 0.0;
  for (Provenance p : {Provenance::kSymm, Provenance::kLapNorm}) {
    const ProcessedGraph pg = Preprocess(d.graph, p, 0.1);
    Dataset on = d;
    on.graph = pg.graph;
    nn::TrainConfig tc;
    tc.epochs = 100;
    const nn::GcnModel model =
        nn::Train(nn::GcnModel::Initialize(static_cast<int>(nn::ModelInput(d.graph).cols()), d.num_classes, {}, 0), on,
                  pg.prop, tc)
            .model;
    const ExplainContext ctx(model, pg);
    for (int v = d.graph.num_nodes() - 40; v < d.graph.num_nodes(); ++v) {
      Explanation e = GnnExplainer(ctx, v, {.epochs = 3});
      std::fill(e.edge_importance.begin(), e.edge_importance.end(), 1.0);
      const FidelityResult f = Fidelity(ctx, e, pg.graph.num_nodes());
      worst = std::max(worst, std::abs(f.fid_minus));
    }
  }
  ok = ok && worst == 0.0;
  detail += ", full-graph Fid- max |.| = " + Fmt("%.1e", worst) + " over 80 nodes";
  return Judge(ok, detail);
}

// ---- 10: Table 2 ------------------------------------------------------------------

Outcome Table2(const fs::path& realworld, const fs::path& work) {
  if (realworld.empty()) return {Verdict::kSkip, "no --realworld-dir given"};
  std::vector<fs::path> manifests;
  for (const auto& entry : fs::directory_iterator(realworld)) {
    if (entry.path().extension() == ".json") manifests.push_back(entry.path());
  }
  std::sort(manifests.begin(), manifests.end());
  const fs::path out = work / "table2";
  fs::remove_all(out);
  fs::create_directories(out);
  int wins = 0;
  int scored = 0;
  std::string detail;
  for (const fs::path& m : manifests) {
    const int rc = Shell(std::string("'") + DGX_CLI_PATH + "' table2 --manifest '" + m.string() +
                         "' --out '" + out.string() + "' >/dev/null");
    if (rc != 0) {
      detail += m.filename().string() + " exit " + std::to_string(rc) + "; ";
      continue;
    }
    // The newest table2_*.json is this manifest's report.
    fs::path newest;
    for (const auto& entry : fs::directory_iterator(out)) {
      const std::string name = entry.path().filename().string();
      if (name.rfind("table2_", 0) == 0 && entry.path().extension() == ".json" &&
          (newest.empty() || fs::last_write_time(entry) > fs::last_write_time(newest))) {
        newest = entry.path();
      }
    }
    const nlohmann::json j = nlohmann::json::parse(Slurp(newest));
    std::optional<double> b;
    std::optional<double> l;
    for (const auto& c : j.at("cells")) {
      if (c.at("explainer") != "gnn") continue;
      (c.at("pipeline") == "symm" ? b : l) = c.at("char").get<double>();
    }
    ++scored;
    const bool win = b && l && *l > *b;
    wins += win;
    detail += j.at("dataset").get<std::string>() + " B=" + (b ? Fmt("%.3f", *b) : "n/a") +
              " L=" + (l ? Fmt("%.3f", *l) : "n/a") + "; ";
  }
  if (manifests.size() < 5) {
    return {Verdict::kFail, "found " + std::to_string(manifests.size()) + " manifests, need 5; " + detail};
  }
  return Judge(wins >= 4, std::to_string(wins) + "/" + std::to_string(scored) + " GNN Char(L) > Char(B); " + detail);
}

}  // namespace
}  // namespace dgx

int main(int argc, char** argv) {
  CLI::App app{"acceptance criteria"};
  std::string work = (fs::temp_directory_path() / "dgx_acceptance").string();
  std::string realworld;
  std::string only_text;
  app.add_option("--work", work, "scratch directory for CLI runs");
  app.add_option("--realworld-dir", realworld, "directory of real-world manifests");
  app.add_option("--only", only_text, "comma-separated criteria to run");
  CLI11_PARSE(app, argc, argv);

  std::set<int> only;
  if (!only_text.empty()) {
    std::stringstream ss(only_text);
    for (std::string item; std::getline(ss, item, ',');) only.insert(std::stoi(item));
  }
  auto wanted = [&](int c) { return only.empty() || only.count(c) > 0; };
  fs::create_directories(work);

  const char* names[] = {"",
                         "directionality gain",
                         "undirected parity",
                         "absolute floor",
                         "directional gain oracle",
                         "entropy consistency",
                         "gradient check",
                         "AUC rank vs pair counting",
                         "metric identities",
                         "reproduce-table1 determinism",
                         "real-world characterization"};
  std::map<int, dgx::Outcome> results;
  auto run = [&](int c, const std::function<dgx::Outcome()>& fn) {
    if (!wanted(c)) return;
    std::printf("running criterion %d (%s)\n", c, names[c]);
    std::fflush(stdout);
    const auto t0 = std::chrono::steady_clock::now();
    results[c] = fn();
    std::printf("  done in %.1f s\n", dgx::Seconds(t0));
    std::fflush(stdout);
  };

  run(7, dgx::AucEquivalence);
  run(8, dgx::MetricIdentities);
  run(6, dgx::Gradients);
  run(5, dgx::Entropy);
  run(4, dgx::Theorem1);
  if (wanted(1) || wanted(2) || wanted(3) || wanted(9)) {
    std::printf("running reproduce-table1 twice (criteria 1, 2, 3, 9)\n");
    std::fflush(stdout);
    const dgx::Table1Runs t = dgx::RunTable1Twice(work);
    run(1, [&] { return dgx::Directionality(t); });
    run(2, [&] { return dgx::Parity(t); });
    run(3, [&] { return dgx::Floor(t); });
    run(9, [&] { return dgx::Determinism(t); });
  }
  run(10, [&] { return dgx::Table2(realworld, work); });

  bool failed = false;
  std::printf("\n");
  for (const auto& [c, o] : results) {
    std::printf("criterion %2d %-30s %s  %s\n", c, names[c], dgx::VerdictName(o.verdict),
                o.detail.c_str());
    failed = failed || o.verdict == dgx::Verdict::kFail;
  }
  return failed ? 1 : 0;
}
