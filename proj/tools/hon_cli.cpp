// Command-line driver: build models, detect the memory order, run the
// analytics and the order sweep, generate synthetic corpora.

#include <chrono>
#include <ctime>
#include <filesystem>
#include <fstream>
#include <iomanip>
#include <iostream>
#include <memory>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "hon/hon.hpp"

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

constexpr const char* kVersion = "1.0.0";

struct RunConfig {
  std::string command;
  std::string graph_file;
  std::string ngram_file;
  std::string model_file;
  std::string test_file;
  std::string context;
  std::size_t order = 1;
  std::size_t max_order = 5;
  std::string variant = "attributed";
  std::string weight_mode = "auto";
  std::string pairs = "ho";
  double alpha = 0.85;
  double tol = 1e-10;
  std::size_t max_iter = 100000;
  double epsilon = hon::kDefaultSignificance;
  double split = 0.5;
  std::uint64_t seed = 42;
  std::string out_dir = "hon_out";
  unsigned threads = 0;
  bool with_start = false;
  // synth
  std::size_t synth_order = 3;
  std::size_t nodes = 20;
  std::size_t extra_edges = 2;
  double skew = 0.3;
  std::size_t paths = 20000;
  std::size_t min_length = 10;
  std::size_t max_length = 20;
};

void usage_error(const std::string& what) { throw hon::Error(hon::ErrorKind::usage, what); }

void validate(const RunConfig& c) {
  if (c.order < 1)
    usage_error("--order must be >= 1");
  if (c.max_order < 1)
    usage_error("--max-order must be >= 1");
  if (!(c.alpha > 0.0 && c.alpha < 1.0))
    usage_error("--alpha must lie in (0, 1)");
  if (!(c.tol > 0.0))
    usage_error("--tol must be positive");
  if (c.max_iter < 1)
    usage_error("--max-iter must be >= 1");
  if (!(c.epsilon > 0.0 && c.epsilon < 1.0))
    usage_error("--epsilon must lie in (0, 1)");
  if (!(c.split > 0.0 && c.split < 1.0))
    usage_error("--split must lie in (0, 1)");
  if (c.synth_order < 1)
    usage_error("--order must be >= 1");
  if (c.min_length < 1 || c.min_length > c.max_length)
    usage_error("--min-length must lie in [1, --max-length]");
  if (!(c.skew > 0.0))
    usage_error("--skew must be positive");
}

bool attributed_variant(const RunConfig& c) { return c.variant == "attributed"; }

hon::PairAggregation pair_mode(const RunConfig& c) {
  return c.pairs == "fo" ? hon::PairAggregation::first_order_pairs
                         : hon::PairAggregation::higher_order_pairs;
}

std::uint64_t fnv1a_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  std::uint64_t h = 0xcbf29ce484222325ULL;
  char buf[1 << 16];
  while (in.read(buf, sizeof(buf)) || in.gcount() > 0) {
    for (std::streamsize i = 0; i < in.gcount(); ++i) {
      h ^= static_cast<unsigned char>(buf[i]);
      h *= 0x100000001b3ULL;
    }
  }
  return h;
}

std::string hex64(std::uint64_t v) {
  std::ostringstream os;
  os << std::hex << std::setw(16) << std::setfill('0') << v;
  return os.str();
}

/// Collects outputs of one run and writes them with a manifest.
class RunOutput {
public:
  explicit RunOutput(const RunConfig& cfg)
      : cfg_(cfg), start_(std::chrono::steady_clock::now()) {}

  void write(const std::string& name, const std::string& content) {
    fs::create_directories(cfg_.out_dir);
    const auto path = fs::path(cfg_.out_dir) / name;
    std::ofstream out(path, std::ios::binary);
    if (!out)
      throw hon::Error(hon::ErrorKind::data, "cannot write '" + path.string() + "'");
    out << content;
    outputs_.push_back(name);
  }

  void add_input(const std::string& role, const std::string& path) {
    if (!path.empty())
      inputs_.push_back({{"role", role},
                         {"path", path},
                         {"bytes", fs::file_size(path)},
                         {"fnv1a64", hex64(fnv1a_file(path))}});
  }

  void note(const std::string& key, json value) { extra_[key] = std::move(value); }

  void finish() {
    if (outputs_.empty())
      return;
    const auto elapsed =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - start_).count();
    const std::time_t now = std::time(nullptr);
    char stamp[32];
    std::strftime(stamp, sizeof(stamp), "%Y-%m-%dT%H:%M:%SZ", std::gmtime(&now));
    json manifest = {
        {"tool", "hon"},
        {"version", kVersion},
        {"command", cfg_.command},
        {"inputs", inputs_},
        {"outputs", outputs_},
        {"parameters",
         {{"order", cfg_.order},
          {"max_order", cfg_.max_order},
          {"variant", cfg_.variant},
          {"weight_mode", cfg_.weight_mode},
          {"pairs", cfg_.pairs},
          {"alpha", cfg_.alpha},
          {"tol", cfg_.tol},
          {"max_iter", cfg_.max_iter},
          {"epsilon", cfg_.epsilon},
          {"split", cfg_.split},
          {"with_start", cfg_.with_start},
          {"synth_order", cfg_.synth_order},
          {"nodes", cfg_.nodes},
          {"extra_edges", cfg_.extra_edges},
          {"skew", cfg_.skew},
          {"paths", cfg_.paths},
          {"min_length", cfg_.min_length},
          {"max_length", cfg_.max_length}}},
        {"seed", cfg_.seed},
        {"threads", cfg_.threads == 0 ? hon::default_threads() : cfg_.threads},
        {"created_utc", stamp},
        {"runtime_seconds", elapsed}};
    if (!extra_.empty())
      manifest["notes"] = extra_;
    fs::create_directories(cfg_.out_dir);
    std::ofstream out(fs::path(cfg_.out_dir) / ("manifest_" + cfg_.command + ".json"));
    out << manifest.dump(2) << '\n';
  }

private:
  const RunConfig& cfg_;
  std::chrono::steady_clock::time_point start_;
  std::vector<std::string> outputs_;
  json inputs_ = json::array();
  json extra_ = json::object();
};

struct Inputs {
  std::shared_ptr<const hon::FirstOrderGraph> graph;
  std::optional<hon::PathCorpus> corpus;
};

Inputs load_inputs(const RunConfig& c, RunOutput& out) {
  Inputs in;
  if (!c.graph_file.empty()) {
    in.graph = std::make_shared<const hon::FirstOrderGraph>(hon::read_edge_list(c.graph_file));
    out.add_input("graph", c.graph_file);
  }
  if (!c.ngram_file.empty()) {
    in.corpus = hon::parse_ngram_file(c.ngram_file,
                                      in.graph ? in.graph->labels() : hon::LabelTable{});
    out.add_input("ngram", c.ngram_file);
    if (in.graph)
      hon::validate_paths(*in.corpus, *in.graph);
  }
  return in;
}

const hon::PathCorpus& require_corpus(const Inputs& in) {
  if (!in.corpus)
    usage_error("this command needs --ngram");
  return *in.corpus;
}

hon::HigherOrderModel resolve_model(const RunConfig& c, const Inputs& in, RunOutput& out) {
  if (!c.model_file.empty()) {
    out.add_input("model", c.model_file);
    return hon::load_model(c.model_file);
  }
  if (in.corpus)
    return hon::build_from_paths(*in.corpus, c.order, attributed_variant(c));
  if (in.graph) {
    if (c.order == 1 && attributed_variant(c))
      return hon::model_from_graph(*in.graph);
    return hon::build_from_topology(*in.graph, c.order);
  }
  usage_error("need --model, --ngram or --graph");
  return {};
}

hon::WeightMode resolve_weight_mode(const RunConfig& c, const hon::HigherOrderModel& m) {
  if (c.weight_mode == "unit")
    return hon::WeightMode::unit;
  if (c.weight_mode == "neg_log_prob")
    return hon::WeightMode::neg_log_prob;
  return m.attributed() ? hon::WeightMode::neg_log_prob : hon::WeightMode::unit;
}

const char* weight_mode_name(hon::WeightMode w) {
  return w == hon::WeightMode::unit ? "unit" : "neg_log_prob";
}

std::string scores_csv(const hon::ScoreVector& sv) {
  std::ostringstream os;
  hon::write_scores_csv(os, sv);
  return os.str();
}

json scores_json(const hon::ScoreVector& sv) {
  json arr = json::array();
  for (const auto& [label, v] : sv.ranked())
    arr.push_back({{"node", label}, {"score", v}});
  return arr;
}

hon::NodeTuple parse_context(const std::string& text, const hon::LabelTable& labels) {
  hon::NodeTuple ctx;
  for (auto f : hon::split(text, ',')) {
    auto id = labels.find(f);
    if (!id)
      throw hon::ValidationError("context node '" + std::string(f) + "' unknown to the model");
    ctx.push_back(*id);
  }
  if (ctx.empty())
    usage_error("--context needs at least one node");
  return ctx;
}

int cmd_build(const RunConfig& c) {
  RunOutput out(c);
  auto in = load_inputs(c, out);
  if (!in.corpus && !in.graph)
    usage_error("build needs --ngram or --graph");
  auto model = resolve_model(c, in, out);
  std::ostringstream model_text, csv;
  hon::write_model(model_text, model);
  hon::write_model_csv(csv, model);
  out.write("model.hon", model_text.str());
  out.write("model.csv", csv.str());
  out.finish();
  std::cout << "order=" << model.order() << " nodes=" << model.node_count()
            << " edges=" << model.edge_count() << " skipped_paths=" << model.skipped_paths()
            << '\n';
  return 0;
}

int cmd_detect_order(const RunConfig& c) {
  RunOutput out(c);
  auto in = load_inputs(c, out);
  const auto& corpus = require_corpus(in);
  const hon::FirstOrderGraph g = in.graph ? *in.graph : hon::graph_from_corpus(corpus);
  auto det = hon::detect_optimal_order(corpus, g, c.max_order, c.epsilon, !c.with_start);
  std::ostringstream text;
  json steps = json::array();
  for (const auto& w : det.warnings)
    std::cerr << "warning: " << w << '\n';
  for (const auto& s : det.steps) {
    const auto& r = s.result;
    text << "k=" << s.order << " ll_k=" << hon::format_double(r.ll_null)
         << " ll_k1=" << hon::format_double(r.ll_alt)
         << " lambda=" << hon::format_double(r.lambda) << " delta_dof=" << r.delta_dof
         << " p=" << hon::format_double(r.p_value) << " excluded=" << r.excluded_paths
         << " significant=" << (s.significant ? 1 : 0) << '\n';
    steps.push_back({{"k", s.order},
                     {"ll_k", r.ll_null},
                     {"ll_k1", r.ll_alt},
                     {"lambda", r.lambda},
                     {"delta_dof", r.delta_dof},
                     {"p_value", r.p_value},
                     {"excluded_paths", r.excluded_paths},
                     {"significant", s.significant}});
  }
  text << "optimal_order=" << det.optimal_order << '\n';
  std::cout << text.str();
  json j = {{"optimal_order", det.optimal_order},
            {"max_order", det.max_order},
            {"epsilon", c.epsilon},
            {"condition_on_start", !c.with_start},
            {"steps", steps},
            {"warnings", det.warnings}};
  out.write("detect_order.txt", text.str());
  out.write("detect_order.json", j.dump(2) + "\n");
  out.finish();
  return 0;
}

int cmd_betweenness(const RunConfig& c) {
  RunOutput out(c);
  auto in = load_inputs(c, out);
  auto model = resolve_model(c, in, out);
  hon::BetweennessOptions opt;
  opt.weight_mode = resolve_weight_mode(c, model);
  opt.pairs = pair_mode(c);
  opt.threads = c.threads;
  auto sv = hon::ho_betweenness(model, opt);
  json j = {{"order", model.order()},
            {"attributed", model.attributed()},
            {"weight_mode", weight_mode_name(opt.weight_mode)},
            {"pairs", c.pairs},
            {"normalized", sv.normalized},
            {"scores", scores_json(sv)}};
  out.write("betweenness.csv", scores_csv(sv));
  out.write("betweenness.json", j.dump(2) + "\n");
  out.finish();
  std::cout << scores_csv(sv);
  return 0;
}

int cmd_pagerank(const RunConfig& c) {
  RunOutput out(c);
  auto in = load_inputs(c, out);
  auto model = resolve_model(c, in, out);
  hon::PageRankOptions opt{c.alpha, c.tol, c.max_iter, c.threads};
  auto pr = hon::ho_pagerank(model, opt);
  auto sv = hon::project_pagerank(model, pr.scores);
  std::vector<std::pair<std::string, double>> ho_rows;
  for (std::uint32_t h = 0; h < model.node_count(); ++h) {
    auto t = model.node(h);
    ho_rows.emplace_back(hon::join_labels(model.labels(), hon::NodeTuple(t.begin(), t.end())),
                         pr.scores[h]);
  }
  std::stable_sort(ho_rows.begin(), ho_rows.end(), [](const auto& a, const auto& b) {
    return a.second != b.second ? a.second > b.second : a.first < b.first;
  });
  std::ostringstream ho_csv;
  ho_csv << "ho_node,score\n";
  for (const auto& [label, v] : ho_rows)
    ho_csv << label << ',' << hon::format_double(v) << '\n';
  json j = {{"order", model.order()},   {"alpha", c.alpha},
            {"tol", c.tol},             {"iterations", pr.iterations},
            {"residual", pr.residual},  {"scores", scores_json(sv)}};
  out.write("pagerank.csv", scores_csv(sv));
  out.write("pagerank_ho.csv", ho_csv.str());
  out.write("pagerank.json", j.dump(2) + "\n");
  out.finish();
  std::cout << scores_csv(sv);
  return 0;
}

int cmd_predict(const RunConfig& c) {
  RunOutput out(c);
  auto in = load_inputs(c, out);
  const auto& corpus = require_corpus(in);
  auto model = hon::build_multi_order(corpus, c.max_order, attributed_variant(c));
  if (in.graph)
    model.attach_first_order(in.graph);
  for (const auto& w : model.warnings())
    std::cerr << "warning: " << w << '\n';
  json j = {{"max_order", model.max_order()}, {"variant", c.variant}};
  std::ostringstream text;
  if (!c.context.empty()) {
    auto ctx = parse_context(c.context, model.labels());
    auto pred = hon::predict_next(model, ctx);
    std::vector<std::pair<std::string, double>> rows;
    for (const auto& [v, p] : pred.distribution)
      rows.emplace_back(model.labels().label(v), p);
    std::sort(rows.begin(), rows.end());
    text << "top=" << model.labels().label(pred.top) << " used_order=" << pred.used_order
         << '\n';
    text << "node,prob\n";
    json dist = json::array();
    for (const auto& [label, p] : rows) {
      text << label << ',' << hon::format_double(p) << '\n';
      dist.push_back({{"node", label}, {"prob", p}});
    }
    j["prediction"] = {{"context", c.context},
                       {"top", model.labels().label(pred.top)},
                       {"used_order", pred.used_order},
                       {"distribution", dist}};
  }
  if (!c.test_file.empty()) {
    auto test = hon::parse_ngram_file(c.test_file, corpus.labels);
    out.add_input("test", c.test_file);
    auto samples = hon::prediction_samples(test, model.max_order());
    auto score = hon::evaluate_prediction(model, samples);
    text << "cross_entropy=" << hon::format_double(score.cross_entropy)
         << " accuracy=" << hon::format_double(score.accuracy) << " samples=" << score.samples
         << " unresolved=" << score.unresolved << '\n';
    j["evaluation"] = {{"cross_entropy", score.cross_entropy},
                       {"accuracy", score.accuracy},
                       {"samples", score.samples},
                       {"unresolved", score.unresolved}};
  }
  if (c.context.empty() && c.test_file.empty())
    usage_error("predict needs --context or --test");
  std::cout << text.str();
  out.write("predict.json", j.dump(2) + "\n");
  out.finish();
  return 0;
}

int cmd_evaluate(const RunConfig& c) {
  RunOutput out(c);
  auto in = load_inputs(c, out);
  hon::SweepOptions opt;
  opt.max_order = c.max_order;
  opt.split = c.split;
  opt.seed = c.seed;
  opt.pagerank = {c.alpha, c.tol, c.max_iter, c.threads};
  opt.pairs = pair_mode(c);
  opt.threads = c.threads;
  opt.graph = in.graph;
  const auto sweep = hon::evaluate_orders(require_corpus(in), opt);
  for (const auto& w : sweep.warnings)
    std::cerr << "warning: " << w << '\n';

  std::ostringstream csv;
  csv << "k,variant,metric,value\n";
  json rows = json::array();
  for (const auto& r : sweep.rows) {
    csv << r.k << ',' << r.variant << ',' << r.metric << ',' << hon::format_double(r.value) << '\n';
    rows.push_back({{"k", r.k}, {"variant", r.variant}, {"metric", r.metric}, {"value", r.value}});
  }
  json j = {{"max_order", sweep.max_order},
            {"split", c.split},
            {"seed", c.seed},
            {"alpha", c.alpha},
            {"tol", c.tol},
            {"pairs", c.pairs},
            {"train_paths", sweep.train_paths},
            {"test_paths", sweep.test_paths},
            {"prediction_samples", sweep.prediction_samples},
            {"rows", rows}};
  out.write("evaluate.csv", csv.str());
  out.write("evaluate.json", j.dump(2) + "\n");
  out.finish();
  std::cout << csv.str();
  return 0;
}

int cmd_synth(const RunConfig& c) {
  RunOutput out(c);
  Inputs in;
  if (!c.graph_file.empty()) {
    in.graph = std::make_shared<const hon::FirstOrderGraph>(hon::read_edge_list(c.graph_file));
    out.add_input("graph", c.graph_file);
  }
  const hon::FirstOrderGraph g =
      in.graph ? *in.graph : hon::random_strongly_connected_graph(c.nodes, c.extra_edges, c.seed);
  auto pm = hon::random_planted_model(g, c.synth_order, c.skew, c.seed);
  auto gen = hon::generate_corpus(pm, c.paths, c.min_length, c.max_length, c.seed, c.threads);
  std::ostringstream ngram, edges;
  hon::write_ngram(ngram, gen.corpus);
  hon::write_edge_list(edges, g);
  out.write("corpus.ngram", ngram.str());
  out.write("graph.tsv", edges.str());
  out.note("truncated_paths", gen.stats.truncated);
  out.finish();
  std::cout << "paths=" << gen.corpus.total_paths() << " nodes=" << g.node_count()
            << " edges=" << g.edge_count() << " order=" << c.synth_order
            << " truncated=" << gen.stats.truncated << '\n';
  return 0;
}

int cmd_stats(const RunConfig& c) {
  RunOutput out(c);
  auto in = load_inputs(c, out);
  const auto s = hon::path_length_stats(require_corpus(in));
  std::ostringstream csv;
  csv << "length,count\n";
  for (const auto& [len, n] : s.histogram)
    csv << len << ',' << n << '\n';
  out.write("stats.csv", csv.str());
  out.finish();
  std::cout << "count=" << s.count << " mean=" << hon::format_double(s.mean) << '\n';
  return 0;
}

int exit_code(hon::ErrorKind k) {
  switch (k) {
  case hon::ErrorKind::usage:
    return 1;
  case hon::ErrorKind::data:
    return 2;
  case hon::ErrorKind::numerical:
    return 3;
  }
  return 2;
}

const char* kind_name(hon::ErrorKind k) {
  switch (k) {
  case hon::ErrorKind::usage:
    return "usage";
  case hon::ErrorKind::data:
    return "data";
  case hon::ErrorKind::numerical:
    return "numerical";
  }
  return "data";
}

void fail_line(const char* kind, const std::string& reason) {
  std::string flat = reason;
  std::replace(flat.begin(), flat.end(), '\n', ' ');
  std::cerr << "hon: error=" << kind << " reason=" << flat << '\n';
}

} // namespace

int main(int argc, char** argv) {
  RunConfig cfg;
  CLI::App app{"Higher-order network models from trajectory data"};
  app.require_subcommand(1);
  app.set_version_flag("--version", kVersion);

  auto add_common = [&](CLI::App* sub) {
    sub->add_option("--graph", cfg.graph_file, "Edge list (source<TAB>target[<TAB>weight])")
        ->check(CLI::ExistingFile);
    sub->add_option("--ngram", cfg.ngram_file, "Trajectory corpus, one comma-separated path per line")
        ->check(CLI::ExistingFile);
    sub->add_option("--out", cfg.out_dir, "Output directory")->capture_default_str();
    sub->add_option("--threads", cfg.threads, "Worker threads (0 = all cores)")
        ->capture_default_str();
  };
  auto add_model = [&](CLI::App* sub) {
    sub->add_option("--model", cfg.model_file, "Serialized model from `build`")
        ->check(CLI::ExistingFile);
    sub->add_option("-k,--order", cfg.order, "Model order")->capture_default_str();
    sub->add_option("--variant", cfg.variant, "attributed | non_attributed")
        ->check(CLI::IsMember({"attributed", "non_attributed"}))
        ->capture_default_str();
  };

  auto* build = app.add_subcommand("build", "Construct and serialize an order-k model");
  add_common(build);
  add_model(build);

  auto* detect = app.add_subcommand("detect-order", "Likelihood-ratio order detection");
  add_common(detect);
  detect->add_option("-K,--max-order", cfg.max_order, "Largest order tested")
      ->capture_default_str();
  detect->add_option("--epsilon", cfg.epsilon, "Significance level")->capture_default_str();
  detect->add_flag("--with-start", cfg.with_start,
                   "Include the start-node probability in path likelihoods");

  auto* between = app.add_subcommand("betweenness", "Higher-order betweenness centrality");
  add_common(between);
  add_model(between);
  between->add_option("--weight-mode", cfg.weight_mode, "auto | neg_log_prob | unit")
      ->check(CLI::IsMember({"auto", "neg_log_prob", "unit"}))
      ->capture_default_str();
  between->add_option("--pairs", cfg.pairs, "ho (per higher-order pair) | fo (pooled per first-order pair)")
      ->check(CLI::IsMember({"ho", "fo"}))
      ->capture_default_str();

  auto* pagerank = app.add_subcommand("pagerank", "Higher-order PageRank with projection");
  add_common(pagerank);
  add_model(pagerank);
  pagerank->add_option("--alpha", cfg.alpha, "Damping factor")->capture_default_str();
  pagerank->add_option("--tol", cfg.tol, "L1 convergence threshold")->capture_default_str();
  pagerank->add_option("--max-iter", cfg.max_iter, "Iteration limit")->capture_default_str();

  auto* predict = app.add_subcommand("predict", "Multi-order next-step prediction");
  add_common(predict);
  predict->add_option("-K,--max-order", cfg.max_order, "Maximum order")->capture_default_str();
  predict->add_option("--variant", cfg.variant, "attributed | non_attributed")
      ->check(CLI::IsMember({"attributed", "non_attributed"}))
      ->capture_default_str();
  predict->add_option("--context", cfg.context, "Comma-separated context, oldest first");
  predict->add_option("--test", cfg.test_file, "Held-out ngram corpus to score")
      ->check(CLI::ExistingFile);

  auto* evaluate = app.add_subcommand("evaluate", "Sweep orders 1..K against trajectory ground truth");
  add_common(evaluate);
  evaluate->add_option("-K,--max-order", cfg.max_order, "Largest order")->capture_default_str();
  evaluate->add_option("--split", cfg.split, "Train fraction")->capture_default_str();
  evaluate->add_option("--seed", cfg.seed, "Split seed")->capture_default_str();
  evaluate->add_option("--alpha", cfg.alpha, "PageRank damping")->capture_default_str();
  evaluate->add_option("--tol", cfg.tol, "PageRank tolerance")->capture_default_str();
  evaluate->add_option("--max-iter", cfg.max_iter, "PageRank iteration limit")
      ->capture_default_str();
  evaluate->add_option("--pairs", cfg.pairs, "Betweenness pair aggregation: ho | fo")
      ->check(CLI::IsMember({"ho", "fo"}))
      ->capture_default_str();

  auto* synth = app.add_subcommand("synth", "Generate a corpus from a planted k-th order chain");
  synth->add_option("--graph", cfg.graph_file, "Base graph (default: random strongly connected)")
      ->check(CLI::ExistingFile);
  synth->add_option("--out", cfg.out_dir, "Output directory")->capture_default_str();
  synth->add_option("--threads", cfg.threads, "Worker threads")->capture_default_str();
  synth->add_option("-k,--order", cfg.synth_order, "Planted order")->capture_default_str();
  synth->add_option("--skew", cfg.skew, "Dirichlet concentration")->capture_default_str();
  synth->add_option("--paths", cfg.paths, "Number of paths")->capture_default_str();
  synth->add_option("--min-length", cfg.min_length, "Minimum path length")
      ->capture_default_str();
  synth->add_option("--max-length", cfg.max_length, "Maximum path length")
      ->capture_default_str();
  synth->add_option("--nodes", cfg.nodes, "Nodes of the random base graph")
      ->capture_default_str();
  synth->add_option("--extra-edges", cfg.extra_edges, "Random out-edges per node beyond the ring")
      ->capture_default_str();
  synth->add_option("--seed", cfg.seed, "Seed")->capture_default_str();

  auto* stats = app.add_subcommand("stats", "Path-length summary");
  add_common(stats);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    if (e.get_exit_code() == 0)
      return app.exit(e);
    fail_line("usage", e.what());
    return 1;
  }

  try {
    validate(cfg);
    const std::string name = app.get_subcommands().front()->get_name();
    cfg.command = name;
    if (name == "build")
      return cmd_build(cfg);
    if (name == "detect-order")
      return cmd_detect_order(cfg);
    if (name == "betweenness")
      return cmd_betweenness(cfg);
    if (name == "pagerank")
      return cmd_pagerank(cfg);
    if (name == "predict")
      return cmd_predict(cfg);
    if (name == "evaluate")
      return cmd_evaluate(cfg);
    if (name == "synth")
      return cmd_synth(cfg);
    if (name == "stats")
      return cmd_stats(cfg);
    usage_error("unknown command " + name);
  } catch (const hon::Error& e) {
    fail_line(kind_name(e.kind()), e.what());
    return exit_code(e.kind());
  } catch (const std::exception& e) {
    fail_line("data", e.what());
    return 2;
  }
  return 0;
}
