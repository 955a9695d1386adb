// Copyright 2026 The asag authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "asag/cli.hpp"

#include <chrono>
#include <cstdio>
#include <ctime>
#include <filesystem>
#include <fstream>
#include <map>
#include <optional>
#include <set>
#include <sstream>

#include <CLI11.hpp>
#include <json.hpp>

#include "asag/corpus.hpp"
#include "asag/error.hpp"
#include "asag/eval.hpp"
#include "asag/rng.hpp"
#include "asag/serial.hpp"
#include "asag/simfeat.hpp"
#include "asag/synth.hpp"
#include "asag/transfer.hpp"

namespace asag {
namespace {

namespace fs = std::filesystem;

std::string format_double(double v) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.12g", v);
  return buf;
}

struct GlobalFlags {
  std::uint64_t seed = 1;
  int jobs = 1;
  std::string out = ".";
};

struct ResourceFlags {
  std::string stopwords;
  std::string taxonomy;
  std::string lsa;
  std::string w2v;
  std::vector<std::string> disable;

  void add_options(CLI::App* cmd) {
    cmd->add_option("--stopwords", stopwords, "Stopword file (one per line)");
    cmd->add_option("--taxonomy", taxonomy, "Taxonomy resource file");
    cmd->add_option("--lsa", lsa, "LSA embedding file");
    cmd->add_option("--w2v", w2v, "word2vec embedding file");
    cmd->add_option("--disable", disable,
                    "Disable similarity channels (lo,jc,sp,lsa,w2v)")
        ->delimiter(',');
  }

  Resources load(std::ostream& err) const {
    Resources res;
    if (!stopwords.empty()) res.stopwords = load_stopwords(stopwords);
    if (!taxonomy.empty()) res.taxonomy = load_taxonomy(taxonomy);
    if (!lsa.empty()) res.lsa = load_embeddings(lsa);
    if (!w2v.empty()) res.w2v = load_embeddings(w2v);
    for (const auto& name : disable) {
      if (name == "lo") res.channels.lo = false;
      else if (name == "jc") res.channels.jc = false;
      else if (name == "sp") res.channels.sp = false;
      else if (name == "lsa") res.channels.lsa = false;
      else if (name == "w2v") res.channels.w2v = false;
      else throw Error("unknown similarity channel '" + name + "'");
    }
    (void)err;
    return res;
  }

  void describe(std::map<std::string, std::string>& header) const {
    if (!stopwords.empty()) header["stopwords"] = stopwords;
    if (!taxonomy.empty()) header["taxonomy"] = taxonomy;
    if (!lsa.empty()) header["lsa"] = lsa;
    if (!w2v.empty()) header["w2v"] = w2v;
    if (!disable.empty()) {
      std::string joined;
      for (const auto& d : disable) {
        if (!joined.empty()) joined += ',';
        joined += d;
      }
      header["disabled_channels"] = joined;
    }
  }
};

struct TransferFlags {
  double theta1 = 0, theta2 = 0;
  int iter_max = 10;
  double ridge = 1e-3;
  double l2 = 1e-2;
  int epochs = 500;
  double w1_init = 0.5;

  void add_options(CLI::App* cmd) {
    cmd->add_option("--theta1", theta1,
                    "Admission threshold of the initialization phase "
                    "(default: derived from the label count)");
    cmd->add_option("--theta2", theta2,
                    "Admission threshold of the iterative phase");
    cmd->add_option("--iter-max", iter_max, "Maximum iterations")
        ->capture_default_str();
    cmd->add_option("--ridge", ridge, "CCA ridge regularization")
        ->capture_default_str();
    cmd->add_option("--l2", l2, "Classifier L2 penalty")
        ->capture_default_str();
    cmd->add_option("--epochs", epochs, "Classifier epoch cap")
        ->capture_default_str();
    cmd->add_option("--w1-init", w1_init, "Initial text-classifier weight")
        ->capture_default_str();
  }

  TransferConfig config(std::uint64_t seed) const {
    TransferConfig cfg;
    cfg.theta1 = theta1;
    cfg.theta2 = theta2;
    cfg.iter_max = iter_max;
    cfg.cca_ridge = ridge;
    cfg.w1_init = w1_init;
    cfg.w2_init = 1.0 - w1_init;
    cfg.pairing_seed = seed;
    cfg.classifier.l2 = l2;
    cfg.classifier.max_epochs = epochs;
    return cfg;
  }

  void describe(std::map<std::string, std::string>& header) const {
    header["iter_max"] = std::to_string(iter_max);
    header["ridge"] = format_double(ridge);
    header["l2"] = format_double(l2);
    header["epochs"] = std::to_string(epochs);
    header["w1_init"] = format_double(w1_init);
  }
};

void ensure_out_dir(const std::string& out) {
  std::error_code ec;
  fs::create_directories(out, ec);
  if (ec) throw IoError("cannot create output directory: " + out);
}

// Timestamps are confined to this sidecar log so the data outputs stay
// byte-identical across runs.
void append_run_log(const std::string& out, const std::string& line) {
  std::ofstream log(out + "/run.log", std::ios::app);
  if (!log) return;
  const auto now = std::chrono::system_clock::now();
  const std::time_t t = std::chrono::system_clock::to_time_t(now);
  char stamp[32];
  std::strftime(stamp, sizeof(stamp), "%Y-%m-%dT%H:%M:%S",
                std::gmtime(&t));
  log << stamp << "Z " << line << '\n';
}

SourceQuestion question_block(const Dataset& ds, const std::string& id) {
  const Question* q = ds.find_question(id);
  if (q == nullptr) throw Error("question '" + id + "' not in the dataset");
  SourceQuestion s;
  s.question = *q;
  s.answers = ds.answers_for(id);
  if (s.answers.empty()) throw Error("question '" + id + "' has no answers");
  return s;
}

int cmd_ingest(const GlobalFlags& global, const std::string& format,
               const std::string& input, std::string output,
               const std::vector<std::string>& exclude, std::ostream& out) {
  Dataset ds;
  if (format == "canonical") {
    ds = load_canonical(input);
  } else if (format == "mohler") {
    MohlerOptions opts;
    opts.exclude_questions = exclude;
    ds = load_mohler(input, opts);
  } else {
    throw Error("unknown input format '" + format + "'");
  }

  ensure_out_dir(global.out);
  if (output.empty()) output = global.out + "/dataset.json";
  write_canonical(ds, output);

  int graded = 0;
  std::map<std::string, int> histogram;
  for (const auto& a : ds.answers) {
    if (a.grade) {
      ++graded;
      ++histogram[*a.grade];
    }
  }
  out << "questions: " << ds.questions.size() << "\n";
  out << "answers: " << ds.answers.size() << " (" << graded << " graded)\n";
  out << "label histogram:\n";
  if (!ds.questions.empty()) {
    for (const auto& label : ds.questions.front().scheme.labels) {
      const auto it = histogram.find(label.name);
      out << "  " << label.name << ": "
          << (it == histogram.end() ? 0 : it->second) << "\n";
    }
  }
  out << "wrote " << output << "\n";
  append_run_log(global.out, "ingest " + input);
  return 0;
}

int cmd_synth(const GlobalFlags& global, const SynthSpec& spec_in,
              std::string dir, std::ostream& out) {
  SynthSpec spec = spec_in;
  spec.seed = mix_seed(global.seed, "synth");
  const SynthCorpus corpus = generate(spec);
  if (dir.empty()) dir = global.out;
  ensure_out_dir(dir);
  write_canonical(corpus.dataset, dir + "/dataset.json");
  write_embeddings(corpus.lsa, dir + "/lsa.txt");
  write_embeddings(corpus.w2v, dir + "/w2v.txt");
  write_taxonomy(corpus.taxonomy, dir + "/taxonomy.txt");
  out << "wrote " << dir << "/dataset.json (" << corpus.dataset.questions.size()
      << " questions, " << corpus.dataset.answers.size() << " answers)\n";
  out << "wrote " << dir << "/lsa.txt, " << dir << "/w2v.txt, " << dir
      << "/taxonomy.txt\n";
  append_run_log(global.out, "synth");
  return 0;
}

int cmd_features(const GlobalFlags& global, const std::string& dataset,
                 const ResourceFlags& resources, bool normalized,
                 std::ostream& out, std::ostream& err) {
  const Dataset ds = load_canonical(dataset);
  const Resources res = resources.load(err);
  ensure_out_dir(global.out);

  std::map<std::string, std::string> header;
  header["command"] = "features";
  header["dataset"] = dataset;
  header["normalized"] = normalized ? "true" : "false";
  resources.describe(header);

  std::ostringstream csv;
  for (const auto& [key, value] : header) csv << "# " << key << "=" << value << "\n";
  csv << "answer_id,question_id,lo,jc,sp,lsa,w2v\n";
  for (const auto& q : ds.questions) {
    const auto answers = ds.answers_for(q.id);
    if (answers.empty()) continue;
    auto profiles = compute_profiles(q, answers, res, &err);
    if (normalized) profiles = minmax_normalize(profiles);
    for (std::size_t i = 0; i < answers.size(); ++i) {
      const auto& p = profiles[i];
      csv << answers[i].id << ',' << q.id << ',' << format_double(p.lo) << ','
          << format_double(p.jc) << ',' << format_double(p.sp) << ','
          << format_double(p.lsa) << ',' << format_double(p.w2v) << '\n';
    }
  }
  const std::string path = global.out + "/features.csv";
  write_text_file(path, csv.str());
  out << "wrote " << path << "\n";
  append_run_log(global.out, "features " + dataset);
  return 0;
}

int cmd_transfer(const GlobalFlags& global, const std::string& dataset,
                 const std::string& source_id, const std::string& target_id,
                 const ResourceFlags& resources, const TransferFlags& flags,
                 const std::string& score_against, std::ostream& out,
                 std::ostream& err) {
  const Dataset ds = load_canonical(dataset);
  const Resources res = resources.load(err);
  const SourceQuestion source = question_block(ds, source_id);
  const SourceQuestion target_block = question_block(ds, target_id);
  const TargetQuestion target =
      strip_grades(target_block.question, target_block.answers);

  TransferConfig cfg = flags.config(
      mix_seed(global.seed, "pair:" + source_id + "->" + target_id));
  const TransferResult result = run_transfer(source, target, cfg, res);

  std::map<std::string, std::string> header;
  header["command"] = "transfer";
  header["dataset"] = dataset;
  header["source"] = source_id;
  header["target"] = target_id;
  header["seed"] = std::to_string(global.seed);
  header["theta1"] = format_double(result.theta1);
  header["theta2"] = format_double(result.theta2);
  header["theta_rule"] = result.theta_rule;
  flags.describe(header);
  resources.describe(header);

  ensure_out_dir(global.out);
  write_text_file(global.out + "/predictions.csv",
                  render_predictions_csv(result, source.question.scheme,
                                         header));
  write_text_file(global.out + "/trace.json",
                  render_trace_json(result, header));
  save_cca(result.cca, global.out + "/model_cca.json");
  save_model(result.c2, global.out + "/model_c2.json");
  if (result.c1) save_model(*result.c1, global.out + "/model_c1.json");

  out << "thresholds: theta1=" << format_double(result.theta1)
      << " theta2=" << format_double(result.theta2) << " ("
      << result.theta_rule << ")\n";
  out << "final weights: w1=" << format_double(result.final_w1)
      << " w2=" << format_double(result.final_w2) << "\n";
  out << "pool trajectory:";
  for (const auto& t : result.trace) out << ' ' << t.pool_size;
  out << "\n";
  out << "wrote " << global.out << "/predictions.csv, trace.json, models\n";

  if (!score_against.empty()) {
    const Dataset gold_ds = load_canonical(score_against);
    std::map<std::string, int> gold;
    const Question* gq = gold_ds.find_question(target_id);
    if (gq == nullptr) {
      throw Error("question '" + target_id + "' not in " + score_against);
    }
    for (const auto& a : gold_ds.answers_for(target_id)) {
      if (a.grade) gold[a.id] = gq->scheme.index_of(*a.grade);
    }
    std::vector<int> g, p;
    for (const auto& l : result.labels) {
      auto it = gold.find(l.answer_id);
      if (it == gold.end()) continue;
      g.push_back(it->second);
      p.push_back(l.label);
    }
    if (g.empty()) throw Error("no graded target answers to score against");
    if (source.question.scheme.kind == SchemeKind::Ordinal) {
      out << "MAE: " << format_double(mae(g, p, source.question.scheme))
          << " over " << g.size() << " answers\n";
    }
    const F1Result f1 = f1_scores(
        ConfusionMatrix::from_pairs(g, p, source.question.scheme), {});
    out << "macro F1: " << format_double(f1.macro)
        << "  weighted F1: " << format_double(f1.weighted) << "\n";
  }
  append_run_log(global.out, "transfer " + source_id + "->" + target_id);
  return 0;
}

void print_report(const MetricReport& report, std::ostream& out) {
  out << report.protocol_name;
  if (report.protocol == Protocol::SupSl) {
    out << " ("
        << (report.supsl_mode == SupSlMode::Resubstitution ? "resubstitution"
                                                           : "leave-one-out")
        << ")";
  }
  out << ":\n";
  for (const auto& qm : report.per_question) {
    out << "  " << qm.question_id << ": ";
    if (qm.mae_value >= 0) out << "mae=" << format_double(qm.mae_value) << " ";
    out << "macroF1=" << format_double(qm.macro_f1)
        << " weightedF1=" << format_double(qm.weighted_f1) << "\n";
  }
  if (report.aggregate_mae >= 0) {
    out << "  aggregate mae=" << format_double(report.aggregate_mae) << "\n";
  }
}

int cmd_baseline(const GlobalFlags& global, const std::string& dataset,
                 const std::string& source_id, const std::string& target_id,
                 const ResourceFlags& resources, const TransferFlags& flags,
                 const std::vector<std::string>& ignore, std::ostream& out,
                 std::ostream& err) {
  const Dataset ds = load_canonical(dataset);
  const Resources res = resources.load(err);
  const std::set<std::string> ignore_set(ignore.begin(), ignore.end());
  const MetricReport report =
      run_sup_bl(question_block(ds, source_id), question_block(ds, target_id),
                 flags.config(global.seed), res, ignore_set);

  std::map<std::string, std::string> header;
  header["command"] = "baseline";
  header["dataset"] = dataset;
  header["source"] = source_id;
  header["target"] = target_id;
  ensure_out_dir(global.out);
  write_text_file(global.out + "/baseline.csv",
                  render_report_csv(report, header));
  print_report(report, out);
  append_run_log(global.out, "baseline " + source_id + "->" + target_id);
  return 0;
}

int cmd_skyline(const GlobalFlags& global, const std::string& dataset,
                const std::string& question_id, const std::string& protocol,
                const ResourceFlags& resources, const TransferFlags& flags,
                const std::vector<std::string>& ignore, std::ostream& out,
                std::ostream& err) {
  const Dataset ds = load_canonical(dataset);
  const Resources res = resources.load(err);
  const std::set<std::string> ignore_set(ignore.begin(), ignore.end());
  const SupSlMode mode = protocol == "loo" ? SupSlMode::LeaveOneOut
                                           : SupSlMode::Resubstitution;
  if (protocol != "loo" && protocol != "resubstitution") {
    throw Error("unknown skyline protocol '" + protocol + "'");
  }

  std::vector<QuestionMetrics> rows;
  SupSlMode used = mode;
  if (!question_id.empty()) {
    MetricReport r = run_sup_sl(question_block(ds, question_id),
                                flags.config(global.seed), res, mode,
                                ignore_set);
    rows = r.per_question;
  } else {
    for (const auto& q : ds.questions) {
      MetricReport r = run_sup_sl(question_block(ds, q.id),
                                  flags.config(global.seed), res, mode,
                                  ignore_set);
      rows.push_back(r.per_question.front());
    }
  }
  MetricReport report = make_report(Protocol::SupSl, rows, ignore_set);
  report.supsl_mode = used;

  std::map<std::string, std::string> header;
  header["command"] = "skyline";
  header["dataset"] = dataset;
  header["protocol"] =
      mode == SupSlMode::LeaveOneOut ? "leave-one-out" : "resubstitution";
  ensure_out_dir(global.out);
  write_text_file(global.out + "/skyline.csv",
                  render_report_csv(report, header));
  print_report(report, out);
  append_run_log(global.out, "skyline");
  return 0;
}

int cmd_benchmark(const GlobalFlags& global, const std::string& dataset,
                  const ResourceFlags& resources, const TransferFlags& flags,
                  const std::vector<std::string>& ignore,
                  const std::string& protocol, std::ostream& out,
                  std::ostream& err) {
  const Dataset ds = load_canonical(dataset);
  const Resources res = resources.load(err);
  const std::set<std::string> ignore_set(ignore.begin(), ignore.end());
  const SupSlMode mode = protocol == "loo" ? SupSlMode::LeaveOneOut
                                           : SupSlMode::Resubstitution;
  if (protocol != "loo" && protocol != "resubstitution") {
    throw Error("unknown skyline protocol '" + protocol + "'");
  }
  TransferConfig cfg = flags.config(global.seed);
  const GradeScheme& scheme = ds.questions.front().scheme;
  const bool ordinal = scheme.kind == SchemeKind::Ordinal;

  // Proposed: the full transfer matrix, keeping each target's best source.
  const SweepResult swept = sweep(ds, cfg, res, ignore_set, global.jobs);

  // Sup-BL matrix, also reduced to each target's best source.
  std::map<std::string, QuestionMetrics> supbl_best;
  for (const auto& src : ds.questions) {
    for (const auto& tgt : ds.questions) {
      if (src.id == tgt.id) continue;
      const MetricReport r =
          run_sup_bl(question_block(ds, src.id), question_block(ds, tgt.id),
                     cfg, res, ignore_set);
      const QuestionMetrics& qm = r.per_question.front();
      auto it = supbl_best.find(tgt.id);
      const bool better =
          it == supbl_best.end() ||
          (ordinal ? qm.mae_value < it->second.mae_value
                   : qm.weighted_f1 > it->second.weighted_f1);
      if (better) supbl_best[tgt.id] = qm;
    }
  }

  std::vector<QuestionMetrics> supsl_rows;
  for (const auto& q : ds.questions) {
    supsl_rows.push_back(run_sup_sl(question_block(ds, q.id), cfg, res, mode,
                                    ignore_set)
                             .per_question.front());
  }

  std::vector<QuestionMetrics> supbl_rows;
  std::vector<QuestionMetrics> proposed_rows;
  for (const auto& q : ds.questions) {
    supbl_rows.push_back(supbl_best.at(q.id));
    for (const auto& row : swept.best) {
      if (row.target_id != q.id) continue;
      QuestionMetrics qm;
      qm.question_id = q.id;
      qm.mae_value = row.mae_value;
      qm.macro_f1 = row.macro_f1;
      qm.weighted_f1 = row.weighted_f1;
      qm.scored = static_cast<int>(ds.answers_for(q.id).size());
      proposed_rows.push_back(qm);
    }
  }

  MetricReport supbl = make_report(Protocol::SupBl, supbl_rows, ignore_set);
  MetricReport supsl = make_report(Protocol::SupSl, supsl_rows, ignore_set);
  supsl.supsl_mode = mode;
  MetricReport proposed =
      make_report(Protocol::Proposed, proposed_rows, ignore_set);

  std::map<std::string, std::string> header;
  header["command"] = "benchmark";
  header["dataset"] = dataset;
  header["seed"] = std::to_string(global.seed);
  header["supsl_protocol"] =
      mode == SupSlMode::LeaveOneOut ? "leave-one-out" : "resubstitution";
  flags.describe(header);
  resources.describe(header);

  ensure_out_dir(global.out);

  // Per-question table: baseline, projected-classifier phase, proposed,
  // skyline.
  std::ostringstream table;
  for (const auto& [key, value] : header) table << "# " << key << "=" << value << "\n";
  table << "question,sup_bl,c2_phase1,proposed,sup_sl\n";
  for (std::size_t i = 0; i < ds.questions.size(); ++i) {
    const std::string& qid = ds.questions[i].id;
    const BestRow* best = nullptr;
    for (const auto& row : swept.best) {
      if (row.target_id == qid) best = &row;
    }
    auto cell = [&](double mae_v, double f1_v) {
      return ordinal ? format_double(mae_v) : format_double(f1_v);
    };
    table << qid << ','
          << cell(supbl_rows[i].mae_value, supbl_rows[i].weighted_f1) << ','
          << (best ? cell(best->phase1_mae, 0) : "") << ','
          << cell(proposed_rows[i].mae_value, proposed_rows[i].weighted_f1)
          << ','
          << cell(supsl_rows[i].mae_value, supsl_rows[i].weighted_f1) << '\n';
  }
  write_text_file(global.out + "/per_question.csv", table.str());

  // Full transfer matrix.
  std::ostringstream matrix;
  for (const auto& [key, value] : header) matrix << "# " << key << "=" << value << "\n";
  matrix << "source,target,mae,phase1_mae,macro_f1,weighted_f1,iterations\n";
  for (const auto& cell : swept.cells) {
    matrix << cell.source_id << ',' << cell.target_id << ','
           << (cell.mae_value >= 0 ? format_double(cell.mae_value) : "") << ','
           << (cell.phase1_mae >= 0 ? format_double(cell.phase1_mae) : "")
           << ',' << format_double(cell.macro_f1) << ','
           << format_double(cell.weighted_f1) << ',' << cell.iterations
           << '\n';
  }
  write_text_file(global.out + "/matrix.csv", matrix.str());

  write_text_file(global.out + "/summary.json",
                  render_summary_json({supbl, supsl, proposed}, header));

  for (const auto& r : {supbl, supsl, proposed}) {
    if (ordinal) {
      out << r.protocol_name << " aggregate MAE: "
          << format_double(r.aggregate_mae) << "\n";
    } else {
      out << r.protocol_name << " aggregate weighted F1: "
          << format_double(r.aggregate_weighted_f1) << "\n";
    }
  }
  out << "wrote " << global.out
      << "/per_question.csv, matrix.csv, summary.json\n";
  append_run_log(global.out, "benchmark " + dataset);
  return 0;
}

int cmd_report(const std::string& summary_path, std::ostream& out) {
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(read_text_file(summary_path));
  } catch (const nlohmann::json::parse_error& e) {
    throw Error(std::string("bad summary file: ") + e.what());
  }
  if (!j.contains("rows")) throw Error("summary has no 'rows' object");
  out << "protocol      mae      macro_f1  weighted_f1\n";
  for (const std::string name : {"sup-bl", "sup-sl", "proposed"}) {
    if (!j["rows"].contains(name)) continue;
    const auto& row = j["rows"][name];
    char line[128];
    std::snprintf(line, sizeof(line), "%-12s  %-7s  %-8s  %s\n", name.c_str(),
                  row.contains("mae")
                      ? format_double(row["mae"].get<double>()).c_str()
                      : "-",
                  format_double(row["macro_f1"].get<double>()).c_str(),
                  format_double(row["weighted_f1"].get<double>()).c_str());
    out << line;
  }
  return 0;
}

}  // namespace

int run_cli(const std::vector<std::string>& args, std::ostream& out,
            std::ostream& err) {
  CLI::App app{"Short-answer grading by iterative ensemble transfer"};
  app.require_subcommand(1);
  app.set_config("--config", "", "Key-value config file; flags win");

  GlobalFlags global;
  app.add_option("--seed", global.seed, "Root seed for all randomness")
      ->capture_default_str();
  app.add_option("--jobs", global.jobs, "Worker threads for benchmark sweeps")
      ->capture_default_str();
  app.add_option("--out", global.out, "Output directory")
      ->capture_default_str();

  // ingest
  auto* ingest = app.add_subcommand("ingest", "Convert a dataset to canonical JSON");
  std::string ingest_format = "canonical";
  std::string ingest_input;
  std::string ingest_output;
  std::vector<std::string> ingest_exclude;
  ingest->add_option("--format", ingest_format, "canonical | mohler")
      ->capture_default_str();
  ingest->add_option("--input", ingest_input, "Input file or directory")
      ->required();
  ingest->add_option("--output", ingest_output, "Canonical JSON output path");
  ingest->add_option("--exclude", ingest_exclude,
                     "Question ids to drop during ingest")
      ->delimiter(',');

  // synth
  auto* synth = app.add_subcommand("synth", "Generate a synthetic corpus");
  SynthSpec synth_spec;
  std::string synth_dir;
  synth->add_option("--questions", synth_spec.questions)->capture_default_str();
  synth->add_option("--answers", synth_spec.answers_per_question)
      ->capture_default_str();
  synth->add_option("--labels", synth_spec.label_count)->capture_default_str();
  synth->add_option("--topic-vocab", synth_spec.topic_vocab)
      ->capture_default_str();
  synth->add_option("--noise", synth_spec.noise_rate)->capture_default_str();
  synth->add_option("--signal", synth_spec.signal)->capture_default_str();
  synth->add_option("--dir", synth_dir, "Directory for the generated files");

  // features
  auto* features = app.add_subcommand("features", "Write similarity profiles");
  std::string features_dataset;
  bool features_normalized = false;
  ResourceFlags features_res;
  features->add_option("--dataset", features_dataset)->required();
  features->add_flag("--normalized", features_normalized,
                     "Apply per-question min-max normalization");
  features_res.add_options(features);

  // transfer
  auto* transfer = app.add_subcommand(
      "transfer", "Grade a target question from a graded source question");
  std::string transfer_dataset, transfer_source, transfer_target;
  std::string transfer_score_against;
  ResourceFlags transfer_res;
  TransferFlags transfer_flags;
  transfer->add_option("--dataset", transfer_dataset)->required();
  transfer->add_option("--source", transfer_source)->required();
  transfer->add_option("--target", transfer_target)->required();
  transfer->add_option("--score-against", transfer_score_against,
                       "Canonical file with target gold grades; prints MAE");
  transfer_res.add_options(transfer);
  transfer_flags.add_options(transfer);

  // baseline
  auto* baseline = app.add_subcommand(
      "baseline", "Source-trained ensemble applied unchanged to the target");
  std::string baseline_dataset, baseline_source, baseline_target;
  std::vector<std::string> baseline_ignore;
  ResourceFlags baseline_res;
  TransferFlags baseline_flags;
  baseline->add_option("--dataset", baseline_dataset)->required();
  baseline->add_option("--source", baseline_source)->required();
  baseline->add_option("--target", baseline_target)->required();
  baseline->add_option("--ignore", baseline_ignore,
                       "Labels excluded from F1 aggregates")
      ->delimiter(',');
  baseline_res.add_options(baseline);
  baseline_flags.add_options(baseline);

  // skyline
  auto* skyline = app.add_subcommand(
      "skyline", "Ensemble trained and scored on the same question");
  std::string skyline_dataset, skyline_question;
  std::string skyline_protocol = "resubstitution";
  std::vector<std::string> skyline_ignore;
  ResourceFlags skyline_res;
  TransferFlags skyline_flags;
  skyline->add_option("--dataset", skyline_dataset)->required();
  skyline->add_option("--question", skyline_question,
                      "Single question id (default: all)");
  skyline->add_option("--protocol", skyline_protocol,
                      "resubstitution | loo")
      ->capture_default_str();
  skyline->add_option("--ignore", skyline_ignore)->delimiter(',');
  skyline_res.add_options(skyline);
  skyline_flags.add_options(skyline);

  // benchmark
  auto* benchmark = app.add_subcommand(
      "benchmark", "Full baseline/skyline/proposed comparison");
  std::string benchmark_dataset;
  std::string benchmark_protocol = "resubstitution";
  std::vector<std::string> benchmark_ignore;
  ResourceFlags benchmark_res;
  TransferFlags benchmark_flags;
  benchmark->add_option("--dataset", benchmark_dataset)->required();
  benchmark->add_option("--protocol", benchmark_protocol,
                        "Skyline protocol: resubstitution | loo")
      ->capture_default_str();
  benchmark->add_option("--ignore", benchmark_ignore)->delimiter(',');
  benchmark_res.add_options(benchmark);
  benchmark_flags.add_options(benchmark);

  // report
  auto* report = app.add_subcommand("report", "Pretty-print a summary file");
  std::string report_summary;
  report->add_option("--summary", report_summary)->required();

  std::vector<const char*> argv;
  argv.push_back("asag");
  for (const auto& a : args) argv.push_back(a.c_str());

  try {
    app.parse(static_cast<int>(argv.size()), argv.data());
  } catch (const CLI::CallForHelp& e) {
    out << app.help();
    return 0;
  } catch (const CLI::ParseError& e) {
    err << "error: " << e.what() << "\n";
    return 2;
  }

  try {
    if (*ingest) {
      return cmd_ingest(global, ingest_format, ingest_input, ingest_output,
                        ingest_exclude, out);
    }
    if (*synth) return cmd_synth(global, synth_spec, synth_dir, out);
    if (*features) {
      return cmd_features(global, features_dataset, features_res,
                          features_normalized, out, err);
    }
    if (*transfer) {
      return cmd_transfer(global, transfer_dataset, transfer_source,
                          transfer_target, transfer_res, transfer_flags,
                          transfer_score_against, out, err);
    }
    if (*baseline) {
      return cmd_baseline(global, baseline_dataset, baseline_source,
                          baseline_target, baseline_res, baseline_flags,
                          baseline_ignore, out, err);
    }
    if (*skyline) {
      return cmd_skyline(global, skyline_dataset, skyline_question,
                         skyline_protocol, skyline_res, skyline_flags,
                         skyline_ignore, out, err);
    }
    if (*benchmark) {
      return cmd_benchmark(global, benchmark_dataset, benchmark_res,
                           benchmark_flags, benchmark_ignore,
                           benchmark_protocol, out, err);
    }
    if (*report) return cmd_report(report_summary, out);
  } catch (const IoError& e) {
    err << "error: " << e.what() << "\n";
    return 2;
  } catch (const Error& e) {
    err << "error: " << e.what() << "\n";
    return 1;
  }
  err << "error: no subcommand selected\n";
  return 2;
}

}  // namespace asag
