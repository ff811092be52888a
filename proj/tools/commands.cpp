// Copyright 2026 The gfk-analogy Authors.
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

#include "commands.hpp"

#include <fstream>
#include <iomanip>
#include <sstream>
#include <utility>

#include "CLI11.hpp"
#include "gfk/analogy_dataset.hpp"
#include "gfk/analogy_eval.hpp"
#include "gfk/embedding_store.hpp"
#include "gfk/grassmann.hpp"
#include "gfk/ppmi_svd.hpp"
#include "gfk/synthetic.hpp"

namespace gfk::cli {
namespace {

constexpr int kRuntimeError = 1;
constexpr int kUsageError = 2;

class UsageError : public Error {
 public:
  using Error::Error;
};

struct DataFlags {
  std::string embeddings;
  std::string questions;
  std::string format = "google";
  std::string msr_layout = "tag-last";
  bool no_normalize = false;
};

struct EvalFlags {
  DataFlags data;
  std::string measure = "all";
  Index subspace_dim = 40;
  double epsilon = 0.001;
  std::string holdout = "answer";
  bool keep_inputs = false;
  bool no_shift = false;
  bool center = false;
  int threads = 0;
  std::string out;
  std::string dims = "20:200:20";
};

struct BuildFlags {
  std::string corpus;
  std::string out;
  std::string preset;
  int window = 2;
  bool positional = false;
  long long min_count = 100;
  Index dim = 500;
  double eigen_weight = 0.5;
  Index dense_limit = 5000;
};

struct AngleFlags {
  DataFlags data;
  std::string relation;
  std::string pairs = "AX,AB";
  std::string dims = "1:40";
  bool center = false;
  std::string out;
  std::string kernel_dump;
};

struct SynthFlags {
  SyntheticOptions opts;
  std::string out_embeddings;
  std::string out_questions;
};

using Echo = std::vector<std::pair<std::string, std::string>>;

std::string bool_str(bool b) { return b ? "true" : "false"; }

template <typename T>
std::string str(const T& v) {
  std::ostringstream os;
  os << v;
  return os.str();
}

void write_echo(std::ostream& out, const std::string& command, const Echo& echo) {
  out << "# command=" << command;
  for (const auto& [k, v] : echo) out << ' ' << k << '=' << v;
  out << '\n';
}

void add_data_flags(CLI::App* sub, DataFlags& f) {
  sub->add_option("--embeddings", f.embeddings, "Text embedding file")->required();
  sub->add_option("--questions", f.questions, "Analogy dataset file")->required();
  sub->add_option("--format", f.format, "Dataset format")
      ->check(CLI::IsMember({"google", "msr"}))
      ->capture_default_str();
  sub->add_option("--msr-layout", f.msr_layout, "Tag column position for MSR files")
      ->check(CLI::IsMember({"tag-last", "tag-first"}))
      ->capture_default_str();
  sub->add_flag("--no-normalize", f.no_normalize, "Keep embedding rows at their stored norm");
}

void add_eval_flags(CLI::App* sub, EvalFlags& f) {
  add_data_flags(sub, f.data);
  sub->add_option("--measure", f.measure, "cosadd, cosmul, gfkcosadd, gfkcosmul or all")
      ->capture_default_str();
  sub->add_option("--subspace-dim", f.subspace_dim, "Head/tail subspace dimension d")
      ->check(CLI::PositiveNumber)
      ->capture_default_str();
  sub->add_option("--epsilon", f.epsilon, "CosMUL denominator offset")
      ->check(CLI::PositiveNumber)
      ->capture_default_str();
  sub->add_option("--holdout", f.holdout, "Withheld subspace material: none, answer, question")
      ->check(CLI::IsMember({"none", "answer", "question"}))
      ->capture_default_str();
  sub->add_flag("--keep-inputs", f.keep_inputs, "Do not remove a, b, x from the candidates");
  sub->add_flag("--no-shift", f.no_shift, "Use raw cosines in the multiplicative objectives");
  sub->add_flag("--center", f.center, "Mean-center word sets before extracting subspaces");
  sub->add_option("--threads", f.threads, "Worker cap (0 = hardware threads)")
      ->check(CLI::NonNegativeNumber)
      ->capture_default_str();
  sub->add_option("--out", f.out, "Output CSV (default: standard output)");
}

EmbeddingTable load_table(const DataFlags& f) {
  return load_text_embeddings(f.embeddings, !f.no_normalize);
}

RelationDataset load_dataset(const DataFlags& f) {
  if (f.format == "msr") {
    return parse_msr(f.questions, f.msr_layout == "tag-first" ? MsrLayout::kTagFirst
                                                              : MsrLayout::kTagLast);
  }
  return parse_google(std::filesystem::path(f.questions));
}

EvalConfig to_config(const EvalFlags& f) {
  EvalConfig c;
  if (ascii_lower(f.measure) != "all") {
    c.measures.clear();
    std::stringstream ss(f.measure);
    std::string item;
    while (std::getline(ss, item, ',')) {
      try {
        c.measures.push_back(parse_measure(item));
      } catch (const Error& e) {
        throw UsageError(e.what());
      }
    }
  }
  c.subspace_dim = f.subspace_dim;
  c.epsilon = f.epsilon;
  c.holdout = parse_holdout(f.holdout);
  c.exclude_inputs = !f.keep_inputs;
  c.shift_cosines = !f.no_shift;
  c.center = f.center;
  c.threads = f.threads;
  return c;
}

Echo eval_echo(const EvalFlags& f) {
  return {{"embeddings", f.data.embeddings},
          {"questions", f.data.questions},
          {"format", f.data.format},
          {"measure", f.measure},
          {"subspace_dim", str(f.subspace_dim)},
          {"epsilon", str(f.epsilon)},
          {"holdout", f.holdout},
          {"exclude_inputs", bool_str(!f.keep_inputs)},
          {"shift_cosines", bool_str(!f.no_shift)},
          {"center", bool_str(f.center)},
          {"normalize", bool_str(!f.data.no_normalize)}};
}

// Writes to --out when given, otherwise to `fallback`.
class Sink {
 public:
  Sink(const std::string& path, std::ostream& fallback) : os_(&fallback) {
    if (!path.empty() && path != "-") {
      file_.open(path);
      if (!file_) throw FileError("cannot write " + path);
      os_ = &file_;
    }
  }
  std::ostream& get() { return *os_; }

 private:
  std::ofstream file_;
  std::ostream* os_;
};

int cmd_build_ppmi(const BuildFlags& f, std::ostream& out) {
  if (!std::filesystem::exists(f.corpus)) throw FileError("corpus not found: " + f.corpus);
  const Corpus corpus = load_corpus(f.corpus);
  const CooccurrenceCounts counts =
      build_cooccurrence(corpus, {f.window, f.positional, f.min_count});
  const SparseMatrix ppmi = ppmi_transform(counts);
  SvdOptions svd;
  svd.dense_limit = f.dense_limit;
  const Index dim =
      std::min<Index>(f.dim, std::min<Index>(ppmi.rows(), ppmi.cols()));
  if (dim < f.dim) {
    warn("requested dim " + std::to_string(f.dim) + " exceeds the PPMI matrix shape; using " +
         std::to_string(dim));
  }
  const EmbeddingTable table = truncated_svd_embed(ppmi, counts.words, dim, f.eigen_weight, svd);
  save_text_embeddings(table, f.out);
  out << "vocab=" << counts.words.size() << " contexts=" << counts.contexts.size()
      << " nnz_counts=" << counts.counts.nonZeros() << " nnz_ppmi=" << ppmi.nonZeros()
      << " words_written=" << table.size() << " dim=" << table.dim() << '\n';
  return 0;
}

void write_summary(std::ostream& out, const std::vector<EvalReport>& reports) {
  for (const auto& rep : reports) {
    out << "# " << measure_name(rep.measure) << " micro_accuracy=" << std::setprecision(6)
        << rep.micro_accuracy << " average_rank=" << rep.micro_average_rank
        << " n=" << rep.n_questions << " oov_dropped=" << rep.oov_dropped
        << " skipped_relations=" << rep.skipped.size() << '\n';
  }
}

int cmd_eval(const EvalFlags& f, std::ostream& out) {
  const EvalConfig config = to_config(f);
  const RelationDataset ds = load_dataset(f.data);
  const EmbeddingTable table = load_table(f.data);
  const auto reports = evaluate(ds, table, config);

  Sink sink(f.out, out);
  std::ostream& csv = sink.get();
  write_echo(csv, "eval", eval_echo(f));
  csv << "relation,n,measure,accuracy,avg_rank\n" << std::setprecision(10);
  for (const auto& rep : reports) {
    for (const auto& r : rep.per_relation) {
      csv << r.relation << ',' << r.n << ',' << measure_name(rep.measure) << ',' << r.accuracy
          << ',' << r.average_rank << '\n';
    }
    csv << "micro," << rep.n_questions << ',' << measure_name(rep.measure) << ',';
    if (rep.n_questions) {
      csv << rep.micro_accuracy << ',' << rep.micro_average_rank << '\n';
    } else {
      csv << "NA,NA\n";
    }
  }
  write_summary(out, reports);
  return 0;
}

int cmd_sweep(const EvalFlags& f, std::ostream& out) {
  const EvalConfig config = to_config(f);
  const std::vector<Index> dims = parse_dims(f.dims);
  const RelationDataset ds = load_dataset(f.data);
  const EmbeddingTable table = load_table(f.data);
  const auto cells = dimension_sweep(ds, table, config, dims);

  Sink sink(f.out, out);
  std::ostream& csv = sink.get();
  Echo echo = eval_echo(f);
  echo.erase(echo.begin() + 4);  // subspace_dim is swept
  echo.emplace_back("dims", f.dims);
  write_echo(csv, "sweep", echo);
  csv << "d,measure,accuracy\n" << std::setprecision(10);
  for (const auto& c : cells) {
    csv << c.d << ',' << measure_name(c.measure) << ',';
    if (c.accuracy) {
      csv << *c.accuracy;
    } else {
      csv << "NA";
    }
    csv << '\n';
  }
  return 0;
}

std::vector<Index> pool_for(char letter, std::span<const ResolvedQuestion> qs) {
  std::vector<Index> pool;
  for (const auto& q : qs) {
    Index w = 0;
    switch (letter) {
      case 'A': w = q.a; break;
      case 'B': w = q.b; break;
      case 'X': w = q.x; break;
      case 'Y': w = q.y; break;
      default: throw UsageError(std::string("unknown category letter '") + letter + "'");
    }
    if (std::find(pool.begin(), pool.end(), w) == pool.end()) pool.push_back(w);
  }
  return pool;
}

int cmd_angles(const AngleFlags& f, std::ostream& out) {
  const std::vector<Index> dims = parse_dims(f.dims);
  std::vector<std::string> pairs;
  {
    std::stringstream ss(f.pairs);
    std::string item;
    while (std::getline(ss, item, ',')) {
      for (char& c : item) c = static_cast<char>(std::toupper(static_cast<unsigned char>(c)));
      if (item.size() != 2) throw UsageError("pair '" + item + "' must be two of A, B, X, Y");
      pairs.push_back(item);
    }
  }
  const RelationDataset ds = load_dataset(f.data);
  const Relation* rel = ds.find(f.relation);
  if (!rel) {
    std::string names;
    for (const auto& n : ds.relation_names()) names += (names.empty() ? "" : ", ") + n;
    throw Error("unknown relation '" + f.relation + "'; valid relations: " + names);
  }
  const EmbeddingTable table = load_table(f.data);
  std::size_t oov = 0;
  const auto qs = resolve_questions(rel->questions, table, &oov);
  if (oov) warn("dropped " + std::to_string(oov) + " question(s) with out-of-vocabulary words");

  Sink sink(f.out, out);
  std::ostream& csv = sink.get();
  write_echo(csv, "angles",
             {{"embeddings", f.data.embeddings},
              {"questions", f.data.questions},
              {"relation", f.relation},
              {"pairs", f.pairs},
              {"dims", f.dims},
              {"center", bool_str(f.center)},
              {"normalize", bool_str(!f.data.no_normalize)}});
  csv << "pair,subspace_dim,angle_index,theta_degrees\n" << std::setprecision(10);
  constexpr double kDegrees = 180.0 / 3.14159265358979323846;
  for (const auto& pair : pairs) {
    const auto p1 = pool_for(pair[0], qs);
    const auto p2 = pool_for(pair[1], qs);
    const RowMatrix m1 = stack_rows(table, p1);
    const RowMatrix m2 = stack_rows(table, p2);
    for (const Index d : dims) {
      if (d < 1 || d >= table.dim() || d > static_cast<Index>(std::min(p1.size(), p2.size()))) {
        warn("pair " + pair + ": d=" + std::to_string(d) + " not supported by pools of size " +
             std::to_string(p1.size()) + "/" + std::to_string(p2.size()));
        continue;
      }
      try {
        const auto pa = principal_angles(subspace_from_rows(m1, d, f.center),
                                         subspace_from_rows(m2, d, f.center));
        for (Index i = 0; i < d; ++i) {
          csv << pair << ',' << d << ',' << i + 1 << ',' << pa.theta(i) * kDegrees << '\n';
        }
      } catch (const Error& e) {
        warn("pair " + pair + ": d=" + std::to_string(d) + ": " + e.what());
      }
    }
  }

  if (!f.kernel_dump.empty()) {
    std::ofstream dump(f.kernel_dump);
    if (!dump) throw FileError("cannot write " + f.kernel_dump);
    const CategoryPools pools = category_pools(qs, Holdout::kNone, nullptr);
    for (const Index d : dims) {
      try {
        const auto [ph, pt] = relation_subspaces(table, pools, d, f.center);
        write_kernel_dump(dump, gfk(principal_angles(ph, pt)),
                          "relation=" + f.relation);
      } catch (const Error& e) {
        warn("kernel dump d=" + std::to_string(d) + ": " + e.what());
      }
    }
  }
  return 0;
}

int cmd_synth(const SynthFlags& f, std::ostream& out) {
  if (2 * f.opts.head_rank > f.opts.dim) {
    throw UsageError("--head-rank " + std::to_string(f.opts.head_rank) +
                     " needs --dim of at least " + std::to_string(2 * f.opts.head_rank));
  }
  if (f.opts.min_angle > f.opts.max_angle) {
    throw UsageError("--min-angle must not exceed --max-angle");
  }
  const SyntheticBenchmark bench = make_rotation_benchmark(f.opts);
  save_text_embeddings(bench.table, f.out_embeddings);
  std::ofstream q(f.out_questions);
  if (!q) throw FileError("cannot write " + f.out_questions);
  write_google(q, bench.dataset);
  out << "words=" << bench.table.size() << " dim=" << bench.table.dim()
      << " relations=" << bench.dataset.relations.size()
      << " questions=" << bench.dataset.question_count() << '\n';
  return 0;
}

}  // namespace

std::vector<Index> parse_dims(const std::string& text) {
  std::vector<Index> out;
  auto to_index = [&](const std::string& s) {
    try {
      std::size_t used = 0;
      const long long v = std::stoll(s, &used);
      if (used != s.size()) throw std::invalid_argument(s);
      return static_cast<Index>(v);
    } catch (const std::exception&) {
      throw UsageError("bad dimension list '" + text + "'");
    }
  };
  if (text.find(':') != std::string::npos) {
    std::vector<std::string> parts;
    std::stringstream ss(text);
    std::string item;
    while (std::getline(ss, item, ':')) parts.push_back(item);
    if (parts.size() < 2 || parts.size() > 3) throw UsageError("bad range '" + text + "'");
    const Index lo = to_index(parts[0]);
    const Index hi = to_index(parts[1]);
    const Index step = parts.size() == 3 ? to_index(parts[2]) : 1;
    if (step < 1 || lo > hi) throw UsageError("bad range '" + text + "'");
    for (Index d = lo; d <= hi; d += step) out.push_back(d);
  } else {
    std::stringstream ss(text);
    std::string item;
    while (std::getline(ss, item, ',')) out.push_back(to_index(item));
  }
  if (out.empty()) throw UsageError("empty dimension list");
  for (const Index d : out) {
    if (d < 1) throw UsageError("dimensions must be positive");
  }
  return out;
}

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Relation-specific geodesic flow kernels for word analogies", "gfk-analogy"};
  app.require_subcommand(1);

  BuildFlags build;
  auto* build_cmd = app.add_subcommand("build-ppmi", "PPMI + truncated SVD embeddings from a corpus");
  build_cmd->add_option("--corpus", build.corpus, "Whitespace-tokenized text corpus")->required();
  build_cmd->add_option("--out", build.out, "Output embedding file")->required();
  build_cmd->add_option("--preset", build.preset, "Window/position preset")
      ->check(CLI::IsMember({"win2-pos", "win5-pos", "win2", "win5"}));
  build_cmd->add_option("--window", build.window, "Context window")
      ->check(CLI::PositiveNumber)
      ->capture_default_str();
  build_cmd->add_option("--positional", build.positional, "Position-aware contexts (true/false)")
      ->capture_default_str();
  build_cmd->add_option("--min-count", build.min_count, "Drop rarer tokens")
      ->check(CLI::NonNegativeNumber)
      ->capture_default_str();
  build_cmd->add_option("--dim", build.dim, "Embedding dimension")
      ->check(CLI::PositiveNumber)
      ->capture_default_str();
  build_cmd->add_option("--eigen-weight", build.eigen_weight, "Singular value exponent p")
      ->check(CLI::Range(0.0, 1.0))
      ->capture_default_str();
  build_cmd->add_option("--dense-limit", build.dense_limit,
                        "Largest matrix side handled by dense SVD")
      ->check(CLI::PositiveNumber)
      ->capture_default_str();

  EvalFlags eval;
  auto* eval_cmd = app.add_subcommand("eval", "Answer an analogy dataset and report accuracy");
  add_eval_flags(eval_cmd, eval);

  EvalFlags sweep;
  sweep.measure = "all";
  auto* sweep_cmd = app.add_subcommand("sweep", "Accuracy as a function of subspace dimension");
  add_eval_flags(sweep_cmd, sweep);
  sweep_cmd->add_option("--dims", sweep.dims, "Dimensions, e.g. 20:200:20")->capture_default_str();

  AngleFlags angles;
  auto* angles_cmd = app.add_subcommand("angles", "Principal angles between category subspaces");
  add_data_flags(angles_cmd, angles.data);
  angles_cmd->add_option("--relation", angles.relation, "Relation name")->required();
  angles_cmd->add_option("--pairs", angles.pairs, "Category pairs, e.g. AX,AB")
      ->capture_default_str();
  angles_cmd->add_option("--dims", angles.dims, "Dimensions, e.g. 1:40")->capture_default_str();
  angles_cmd->add_flag("--center", angles.center, "Mean-center word sets");
  angles_cmd->add_option("--out", angles.out, "Output CSV (default: standard output)");
  angles_cmd->add_option("--kernel-dump", angles.kernel_dump,
                         "Also write theta and Lambda diagonals of the relation kernel per d");

  SynthFlags synth;
  auto* synth_cmd = app.add_subcommand("synth", "Generate a synthetic rotation benchmark");
  synth_cmd->add_option("--n-relations", synth.opts.n_relations)
      ->check(CLI::PositiveNumber)
      ->capture_default_str();
  synth_cmd->add_option("--pairs-per-relation", synth.opts.pairs_per_relation)
      ->check(CLI::Range(2, 1 << 20))
      ->capture_default_str();
  synth_cmd->add_option("--dim", synth.opts.dim)->check(CLI::Range(2, 1 << 16))->capture_default_str();
  synth_cmd->add_option("--noise", synth.opts.noise, "Expected noise norm per vector")
      ->check(CLI::NonNegativeNumber)
      ->capture_default_str();
  synth_cmd->add_option("--head-rank", synth.opts.head_rank, "Rank of each head subspace")
      ->check(CLI::PositiveNumber)
      ->capture_default_str();
  synth_cmd->add_option("--min-angle", synth.opts.min_angle, "Smallest rotation angle (radians)")
      ->check(CLI::NonNegativeNumber)
      ->capture_default_str();
  synth_cmd->add_option("--max-angle", synth.opts.max_angle, "Largest rotation angle (radians)")
      ->check(CLI::NonNegativeNumber)
      ->capture_default_str();
  synth_cmd->add_option("--head-decay", synth.opts.head_decay,
                        "Per-direction scale ratio of head coefficients (1 = isotropic)")
      ->check(CLI::Range(1e-6, 1.0))
      ->capture_default_str();
  synth_cmd->add_option("--seed", synth.opts.seed)->capture_default_str();
  synth_cmd->add_option("--out-embeddings", synth.out_embeddings)->required();
  synth_cmd->add_option("--out-questions", synth.out_questions)->required();

  std::vector<std::string> argv_storage{"gfk-analogy"};
  argv_storage.insert(argv_storage.end(), args.begin(), args.end());
  std::vector<const char*> argv;
  for (const auto& a : argv_storage) argv.push_back(a.c_str());
  try {
    app.parse(static_cast<int>(argv.size()), argv.data());
  } catch (const CLI::ParseError& e) {
    return app.exit(e, out, err) == 0 ? 0 : kUsageError;
  }

  ScopedWarningSink sink([&err](std::string_view msg) { err << "warning: " << msg << '\n'; });
  try {
    if (*build_cmd) {
      if (build.preset == "win2-pos" || build.preset == "win5-pos") build.positional = true;
      if (build.preset == "win2" || build.preset == "win5") build.positional = false;
      if (!build.preset.empty() && build_cmd->count("--window") == 0) {
        build.window = build.preset.rfind("win5", 0) == 0 ? 5 : 2;
      }
      return cmd_build_ppmi(build, out);
    }
    if (*eval_cmd) return cmd_eval(eval, out);
    if (*sweep_cmd) return cmd_sweep(sweep, out);
    if (*angles_cmd) return cmd_angles(angles, out);
    if (*synth_cmd) return cmd_synth(synth, out);
  } catch (const UsageError& e) {
    err << "error: " << e.what() << '\n';
    return kUsageError;
  } catch (const FileError& e) {
    err << "error: " << e.what() << '\n';
    return kUsageError;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return kRuntimeError;
  }
  return kUsageError;
}

}  // namespace gfk::cli
