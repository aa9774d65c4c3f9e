#include "polyparse/cli.hpp"

#include <algorithm>
#include <cstdio>
#include <cstdlib>
#include <exception>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <iterator>
#include <map>
#include <optional>
#include <set>
#include <sstream>

#include <CLI11.hpp>

#include "polyparse/conll.hpp"
#include "polyparse/error.hpp"
#include "polyparse/evaluation.hpp"
#include "polyparse/manifest.hpp"
#include "polyparse/optimizer.hpp"
#include "polyparse/parser.hpp"
#include "polyparse/synthetic.hpp"
#include "polyparse/tagger.hpp"
#include "polyparse/treebank_ops.hpp"

namespace polyparse {

namespace fs = std::filesystem;

namespace {

std::string read_file(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw DataError("cannot open " + path.string());
  return std::string((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
}

std::uint64_t default_seed() {
  const char* env = std::getenv("POLYPARSE_SEED");
  if (env == nullptr || *env == '\0') return 1;
  try {
    std::size_t used = 0;
    const auto value = std::stoull(env, &used);
    if (used != std::string(env).size()) throw std::invalid_argument("trailing characters");
    return value;
  } catch (const std::exception&) {
    throw UsageError(std::string("POLYPARSE_SEED is not an unsigned integer: ") + env);
  }
}

std::string fixed2(double value) {
  char buffer[32];
  std::snprintf(buffer, sizeof buffer, "%.2f", value);
  return buffer;
}

// Tracks inputs for the manifest and stages outputs so that a failing
// command leaves no partial files behind.
class Session {
 public:
  explicit Session(std::ostream& out) : out_(out) {}

  std::string read(const std::string& path) {
    std::string bytes = read_file(path);
    const ManifestFile entry{path, digest(bytes)};
    if (std::find(inputs_.begin(), inputs_.end(), entry) == inputs_.end()) inputs_.push_back(entry);
    return bytes;
  }

  Treebank treebank(const std::string& path, const std::string& lang, const ReadOptions& options = {}) {
    std::istringstream in(read(path));
    try {
      Treebank tb = read_treebank(in, lang, options);
      tb.source = path;
      return tb;
    } catch (const DataError& e) {
      throw DataError(path + ": " + e.what());
    }
  }

  // To a file when path is non-empty, otherwise to standard output.
  void emit(const std::string& path, std::string content) {
    if (path.empty()) {
      out_ << content;
    } else {
      stage(path, std::move(content));
    }
  }

  void stage(const std::string& path, std::string content) {
    for (const auto& [p, c] : staged_) {
      if (p == path) throw UsageError("output " + path + " is written twice");
    }
    staged_.emplace_back(path, std::move(content));
  }

  const std::vector<ManifestFile>& inputs() const { return inputs_; }

  // Writes staged files (plus the manifest next to the first one) through
  // temporary files renamed into place.
  void commit(RunManifest manifest) {
    if (staged_.empty()) return;
    for (const auto& [path, content] : staged_) {
      for (const auto& input : inputs_) {
        if (fs::weakly_canonical(input.path) == fs::weakly_canonical(path)) {
          throw UsageError("output " + path + " would overwrite an input");
        }
      }
      manifest.outputs.push_back({path, digest(content)});
    }
    manifest.inputs = inputs_;
    staged_.emplace_back(staged_.front().first + ".manifest.json", manifest.to_json());

    std::vector<std::string> temporaries;
    auto cleanup = [&] {
      std::error_code ignored;
      for (const auto& t : temporaries) fs::remove(t, ignored);
    };
    for (const auto& [path, content] : staged_) {
      const std::string tmp = path + ".partial";
      temporaries.push_back(tmp);
      std::ofstream out(tmp, std::ios::binary);
      out << content;
      out.close();
      if (!out) {
        cleanup();
        throw DataError("cannot write " + path);
      }
    }
    for (std::size_t i = 0; i < staged_.size(); ++i) {
      std::error_code ec;
      fs::rename(temporaries[i], staged_[i].first, ec);
      if (ec) {
        cleanup();
        throw DataError("cannot write " + staged_[i].first + ": " + ec.message());
      }
    }
  }

 private:
  std::ostream& out_;
  std::vector<ManifestFile> inputs_;
  std::vector<std::pair<std::string, std::string>> staged_;
};

Treebank load_parts(Session& session, const std::vector<std::string>& files, const std::vector<std::string>& langs,
                    const ReadOptions& options, const std::string& what) {
  if (files.empty()) throw UsageError("no " + what + " files given");
  if (!langs.empty() && langs.size() != files.size()) {
    throw UsageError("--lang must be given once per " + what + " file (" + std::to_string(files.size()) + ")");
  }
  std::vector<LanguagePart> parts;
  for (std::size_t i = 0; i < files.size(); ++i) {
    const std::string lang = langs.empty() ? "" : langs[i];
    parts.emplace_back(lang, session.treebank(files[i], lang, options));
  }
  if (parts.size() == 1) return std::move(parts.front().second);
  return merge_treebanks(parts);
}

TagConfig tag_config(const std::string& tags, bool prefix) {
  TagConfig config;
  config.mode = parse_tag_mode(tags);
  config.prefix_language = prefix;
  return config;
}

std::string model_text(const ParserModel& model) {
  std::ostringstream out;
  save_parser(out, model);
  return out.str();
}

std::string tagger_text(const TaggerModel& model) {
  std::ostringstream out;
  save_tagger(out, model);
  return out.str();
}

ParserModel read_parser(Session& session, const std::string& path) {
  std::istringstream in(session.read(path));
  try {
    return load_parser(in);
  } catch (const DataError& e) {
    throw DataError(path + ": " + e.what());
  }
}

TaggerModel read_tagger(Session& session, const std::string& path) {
  std::istringstream in(session.read(path));
  try {
    return load_tagger(in);
  } catch (const DataError& e) {
    throw DataError(path + ": " + e.what());
  }
}

std::string epoch_log(const std::vector<double>& scores, int chosen, const std::string& metric) {
  std::ostringstream out;
  for (std::size_t i = 0; i < scores.size(); ++i) {
    out << "epoch " << (i + 1) << " dev " << metric << ' ' << fixed2(scores[i])
        << (static_cast<int>(i + 1) == chosen ? " *" : "") << '\n';
  }
  return out.str();
}

struct Options {
  std::vector<std::string> inputs;
  std::vector<std::string> langs;
  std::vector<std::string> train;
  std::vector<std::string> dev;
  std::string out;
  std::string tags = "fine";
  bool prefix = false;
  bool repair = false;
  std::string system = "arc-eager";
  int epochs = 0;
  std::uint64_t seed = 1;
  std::string templates;
  std::string model;
  std::string input;
  std::string tagger;
  std::string lang;
  std::string gold;
  std::string pred;
  std::string pred_a;
  std::string pred_b;
  bool exclude_punct = false;
  std::string format = "text";
  std::string metric = "las";
  std::uint64_t iterations = kDefaultIterations;
  std::string pvalues;
  double q = kGridFalseDiscoveryRate;
  std::string column = "postag";
  std::string treebanks;
  std::string pairs = "all";
  int jobs = 1;
  std::string manifest;
  std::string toy = "aa";
  std::size_t sentences = 200;
  bool no_lexical_pp = false;
};

ReadOptions read_options(const Options& o) {
  ReadOptions r;
  r.repair_multiple_roots = o.repair;
  return r;
}

void cmd_merge(Session& s, const Options& o) {
  if (o.langs.size() != o.inputs.size()) throw UsageError("merge needs one --lang per input");
  std::vector<LanguagePart> parts;
  for (std::size_t i = 0; i < o.inputs.size(); ++i) {
    parts.emplace_back(o.langs[i], s.treebank(o.inputs[i], o.langs[i], read_options(o)));
  }
  const Treebank merged = apply_tag_config(merge_treebanks(parts), tag_config(o.tags, o.prefix));
  s.emit(o.out, write_treebank(merged));
}

void cmd_analyze_tags(Session& s, const Options& o) {
  if (o.langs.size() != o.inputs.size()) throw UsageError("analyze-tags needs one --lang per input");
  std::vector<LanguagePart> parts;
  for (std::size_t i = 0; i < o.inputs.size(); ++i) {
    parts.emplace_back(o.langs[i], s.treebank(o.inputs[i], o.langs[i], read_options(o)));
  }
  s.emit(o.out, shared_tag_report(parts).to_tsv());
}

void cmd_train(Session& s, const Options& o, std::ostream& log) {
  const Treebank train = load_parts(s, o.train, o.langs, read_options(o), "--train");
  const Treebank dev = load_parts(s, o.dev, o.langs, read_options(o), "--dev");
  TrainParams params;
  params.epochs = o.epochs > 0 ? o.epochs : TrainParams{}.epochs;
  params.seed = o.seed;
  params.tags = tag_config(o.tags, o.prefix);
  std::vector<FeatureTemplate> templates;
  if (!o.templates.empty()) {
    std::istringstream in(s.read(o.templates));
    templates = read_templates(in);
    if (templates.empty()) throw DataError(o.templates + ": no feature templates");
  }
  if (o.system == "auto") {
    const Optimization result = optimize(train, dev, params, templates);
    s.stage(o.out, model_text(result.model));
    s.stage(o.out + ".report.txt", result.report.to_text());
    s.stage(o.out + ".report.tsv", result.report.to_tsv());
    log << "system " << to_string(result.model.system) << ", " << result.model.templates.size()
        << " templates, dev LAS " << fixed2(result.report.final_las) << '\n';
    return;
  }
  params.system = parse_system(o.system);
  params.templates = templates;
  const ParserModel model = train_parser(train, dev, params);
  s.stage(o.out, model_text(model));
  log << epoch_log(model.meta.dev_las, model.meta.chosen_epoch, "LAS");
}

void cmd_parse(Session& s, const Options& o) {
  const ParserModel model = read_parser(s, o.model);
  ReadOptions r;
  r.allow_missing_heads = true;
  Treebank input = s.treebank(o.input, o.lang, r);
  if (!o.tagger.empty()) input = tag_treebank(read_tagger(s, o.tagger), input);
  s.emit(o.out, write_treebank(parse_treebank(model, input)));
}

void cmd_eval(Session& s, const Options& o) {
  const Treebank gold = s.treebank(o.gold, "", read_options(o));
  const Treebank pred = s.treebank(o.pred, "", read_options(o));
  const EvalReport report = score(gold, pred, o.exclude_punct);
  if (o.format == "tsv") {
    s.emit(o.out, report.to_tsv());
  } else if (o.format == "text") {
    s.emit(o.out, report.to_text());
  } else {
    throw UsageError("unknown --format '" + o.format + "' (expected text or tsv)");
  }
}

void cmd_compare(Session& s, const Options& o) {
  const Treebank gold = s.treebank(o.gold, "", read_options(o));
  const EvalReport a = score(gold, s.treebank(o.pred_a, "", read_options(o)), o.exclude_punct);
  const EvalReport b = score(gold, s.treebank(o.pred_b, "", read_options(o)), o.exclude_punct);
  const SignificanceResult r = randomized_comparator(a, b, parse_metric(o.metric), o.iterations, o.seed);
  s.emit(o.out, SignificanceResult::tsv_header() + "\n" + r.to_tsv() + "\n");
}

void cmd_bh(Session& s, const Options& o) {
  std::istringstream in(s.read(o.pvalues));
  std::vector<std::string> labels;
  std::vector<double> pvalues;
  std::string line;
  int line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty() || line.front() == '#') continue;
    const auto tab = line.rfind('\t');
    const std::string label = tab == std::string::npos ? std::to_string(pvalues.size()) : line.substr(0, tab);
    const std::string field = tab == std::string::npos ? line : line.substr(tab + 1);
    try {
      std::size_t used = 0;
      const double p = std::stod(field, &used);
      if (used != field.size()) throw std::invalid_argument("trailing characters");
      pvalues.push_back(p);
    } catch (const std::exception&) {
      if (pvalues.empty() && labels.empty() && line_no == 1) continue;  // header row
      throw DataError(o.pvalues + ": line " + std::to_string(line_no) + ": not a p-value '" + field + "'");
    }
    labels.push_back(label);
  }
  if (pvalues.empty()) throw DataError(o.pvalues + ": no p-values");
  std::ostringstream out;
  out << "index\tlabel\tp_value\n";
  for (std::size_t i : benjamini_hochberg(pvalues, o.q)) {
    char p[32];
    std::snprintf(p, sizeof p, "%.6g", pvalues[i]);
    out << i << '\t' << labels[i] << '\t' << p << '\n';
  }
  s.emit(o.out, out.str());
}

void cmd_tag_train(Session& s, const Options& o, std::ostream& log) {
  const Treebank train = load_parts(s, o.train, o.langs, read_options(o), "--train");
  const Treebank dev = load_parts(s, o.dev, o.langs, read_options(o), "--dev");
  TaggerParams params;
  params.epochs = o.epochs > 0 ? o.epochs : TaggerParams{}.epochs;
  params.seed = o.seed;
  const TaggerModel model = train_tagger(train, dev, parse_tag_column(o.column), params);
  s.stage(o.out, tagger_text(model));
  std::vector<double> percent;
  for (double a : model.meta.dev_accuracy) percent.push_back(100.0 * a);
  log << epoch_log(percent, model.meta.chosen_epoch, "accuracy");
}

void cmd_tag(Session& s, const Options& o) {
  const TaggerModel model = read_tagger(s, o.model);
  ReadOptions r;
  r.allow_missing_heads = true;
  s.emit(o.out, write_treebank(tag_treebank(model, s.treebank(o.input, o.lang, r))));
}

void cmd_tag_eval(Session& s, const Options& o) {
  ReadOptions r;
  r.allow_missing_heads = true;
  const TagColumn column = parse_tag_column(o.column);
  const double acc = tagging_accuracy(s.treebank(o.gold, "", r), s.treebank(o.pred, "", r), column);
  char buffer[64];
  std::snprintf(buffer, sizeof buffer, "column\taccuracy\n%s\t%.2f\n", to_string(column).c_str(), 100.0 * acc);
  s.emit(o.out, buffer);
}

std::vector<std::string> grid_languages(const Options& o) {
  const fs::path root(o.treebanks);
  if (!fs::is_directory(root)) throw DataError("not a directory: " + o.treebanks);
  std::set<std::string> found;
  for (const auto& entry : fs::directory_iterator(root)) {
    if (!entry.is_directory()) continue;
    const fs::path dir = entry.path();
    if (fs::exists(dir / "train.conll") && fs::exists(dir / "dev.conll") && fs::exists(dir / "test.conll")) {
      found.insert(dir.filename().string());
    }
  }
  if (o.pairs == "all") return {found.begin(), found.end()};
  std::vector<std::string> chosen;
  std::stringstream list(o.pairs);
  std::string lang;
  while (std::getline(list, lang, ',')) {
    if (found.count(lang) == 0) throw DataError("no train/dev/test.conll for language '" + lang + "'");
    if (std::find(chosen.begin(), chosen.end(), lang) == chosen.end()) chosen.push_back(lang);
  }
  std::sort(chosen.begin(), chosen.end());
  return chosen;
}

void cmd_grid(Session& s, const Options& o, std::ostream& log) {
  const auto langs = grid_languages(o);
  if (langs.empty()) throw DataError(o.treebanks + ": no language directories with train/dev/test.conll");
  if (o.jobs < 1) throw UsageError("--jobs must be at least 1");
  const std::size_t n = langs.size();
  std::vector<Treebank> train(n), dev(n), test(n);
  for (std::size_t i = 0; i < n; ++i) {
    const fs::path dir = fs::path(o.treebanks) / langs[i];
    train[i] = s.treebank((dir / "train.conll").string(), langs[i], read_options(o));
    dev[i] = s.treebank((dir / "dev.conll").string(), langs[i], read_options(o));
  }

  TrainParams params;
  params.epochs = o.epochs > 0 ? o.epochs : TrainParams{}.epochs;
  params.seed = o.seed;
  params.system = parse_system(o.system);
  params.tags = tag_config(o.tags, o.prefix);

  // Cell (r, c) with r <= c; the diagonal is the monolingual model.
  std::vector<std::pair<std::size_t, std::size_t>> jobs;
  for (std::size_t r = 0; r < n; ++r) {
    for (std::size_t c = r; c < n; ++c) jobs.emplace_back(r, c);
  }
  std::vector<ParserModel> models(jobs.size());
  std::vector<std::exception_ptr> errors(jobs.size());
  const auto count = static_cast<long long>(jobs.size());
#pragma omp parallel for num_threads(o.jobs) schedule(dynamic, 1)
  for (long long k = 0; k < count; ++k) {
    const auto [r, c] = jobs[static_cast<std::size_t>(k)];
    try {
      if (r == c) {
        models[k] = train_parser(train[r], dev[r], params);
      } else {
        const std::vector<LanguagePart> tr{{langs[r], train[r]}, {langs[c], train[c]}};
        const std::vector<LanguagePart> dv{{langs[r], dev[r]}, {langs[c], dev[c]}};
        models[k] = train_parser(merge_treebanks(tr), merge_treebanks(dv), params);
      }
    } catch (...) {
      errors[k] = std::current_exception();
    }
  }
  for (const auto& e : errors) {
    if (e) std::rethrow_exception(e);
  }
  auto model_for = [&](std::size_t r, std::size_t c) -> const ParserModel& {
    const auto key = std::make_pair(std::min(r, c), std::max(r, c));
    return models[static_cast<std::size_t>(std::find(jobs.begin(), jobs.end(), key) - jobs.begin())];
  };

  // Test sets are read only after every model is trained.
  for (std::size_t i = 0; i < n; ++i) {
    test[i] = s.treebank((fs::path(o.treebanks) / langs[i] / "test.conll").string(), langs[i], read_options(o));
  }
  Grid grid;
  grid.languages = langs;
  grid.cells.assign(n, std::vector<GridCell>(n));
  for (std::size_t r = 0; r < n; ++r) {
    const EvalReport mono = score(test[r], parse_treebank(model_for(r, r), test[r]), o.exclude_punct);
    for (std::size_t c = 0; c < n; ++c) {
      const EvalReport report =
          c == r ? mono : score(test[r], parse_treebank(model_for(r, c), test[r]), o.exclude_punct);
      GridCell& cell = grid.cells[r][c];
      cell.present = true;
      cell.las = report.las();
      cell.uas = report.uas();
      if (c != r) {
        cell.p_las = randomized_comparator(report, mono, Metric::LAS, o.iterations, o.seed).p_value;
        cell.p_uas = randomized_comparator(report, mono, Metric::UAS, o.iterations, o.seed).p_value;
      }
    }
    log << "evaluated " << langs[r] << '\n';
  }
  if (o.out.empty()) {
    s.emit("", grid_report(grid));
  } else {
    s.stage(o.out, grid_report(grid));
    s.stage(o.out + ".tsv", grid_tsv(grid));
  }
}

void cmd_toy(Session& s, const Options& o) {
  ToyOptions options;
  options.lexical_pp = !o.no_lexical_pp;
  Treebank tb;
  if (o.toy == "aa") {
    tb = generate_toy_treebank(toy_language_a(), o.sentences, o.seed, options);
  } else if (o.toy == "bb") {
    tb = generate_toy_treebank(toy_language_b(), o.sentences, o.seed, options);
  } else if (o.toy == "mixed") {
    tb = generate_code_switched(toy_language_a(), toy_language_b(), o.sentences, o.seed, options);
  } else {
    throw UsageError("unknown toy language '" + o.toy + "' (expected aa, bb or mixed)");
  }
  s.emit(o.out, write_treebank(tb));
}

int dispatch(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

void cmd_rerun(const Options& o, std::ostream& out, std::ostream& err) {
  const RunManifest m = RunManifest::from_json(read_file(o.manifest));
  if (m.subcommand == "rerun") throw UsageError("a manifest cannot rerun another rerun");
  for (const auto& input : m.inputs) {
    if (file_digest(input.path) != input.digest) throw DataError("input " + input.path + " changed since the run");
  }
  const int code = dispatch(m.argv, out, err);
  if (code != kExitOk) throw DataError("rerun failed with exit code " + std::to_string(code));
  for (const auto& output : m.outputs) {
    if (file_digest(output.path) != output.digest) {
      throw InvariantError("rerun produced a different " + output.path);
    }
    out << "reproduced " << output.path << '\n';
  }
}

int dispatch(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Multilingual transition-based dependency parsing toolkit", "polyparse"};
  app.require_subcommand(1);
  app.set_version_flag("--version", std::string(kToolkitVersion));
  Options o;
  o.seed = default_seed();
  std::map<CLI::App*, CLI::Option*> seed_options;

  auto* merge = app.add_subcommand("merge", "Merge treebanks of several languages into one CoNLL file");
  merge->add_option("inputs", o.inputs, "CoNLL-X files")->required()->check(CLI::ExistingFile);
  merge->add_option("--lang", o.langs, "Language code per input, in order")->required();
  merge->add_option("--tags", o.tags, "fine or universal");
  merge->add_flag("--prefix-tags", o.prefix, "Prefix tags with the language code");
  merge->add_flag("--repair-roots", o.repair, "Attach extra roots to the first root");
  merge->add_option("--out", o.out, "Output file (default: stdout)");

  auto* analyze = app.add_subcommand("analyze-tags", "Shared fine-tag matrix across languages (TSV)");
  analyze->add_option("inputs", o.inputs, "CoNLL-X files")->required()->check(CLI::ExistingFile);
  analyze->add_option("--lang", o.langs, "Language code per input, in order")->required();
  analyze->add_flag("--repair-roots", o.repair, "Attach extra roots to the first root");
  analyze->add_option("--out", o.out, "Output file (default: stdout)");

  auto* train = app.add_subcommand("train", "Train a parser");
  train->add_option("--train", o.train, "Training file(s); several are merged")->required();
  train->add_option("--dev", o.dev, "Development file(s), same order as --train")->required();
  train->add_option("--lang", o.langs, "Language code per --train/--dev file");
  train->add_option("--system", o.system, "arc-eager, arc-standard or auto");
  train->add_option("--tags", o.tags, "fine or universal");
  train->add_flag("--prefix-lang", o.prefix, "Prefix tags with the sentence language");
  train->add_option("--epochs", o.epochs, "Training epochs (default 15)");
  seed_options[train] = train->add_option("--seed", o.seed, "Random seed (default $POLYPARSE_SEED or 1)");
  train->add_option("--templates", o.templates, "Feature template file (the search pool with --system auto)");
  train->add_flag("--repair-roots", o.repair, "Attach extra roots to the first root");
  train->add_option("--out", o.out, "Model file")->required();

  auto* parse_cmd = app.add_subcommand("parse", "Parse a CoNLL-X file");
  parse_cmd->add_option("--model", o.model, "Parser model")->required();
  parse_cmd->add_option("--input", o.input, "Input CoNLL-X (heads may be _)")->required();
  parse_cmd->add_option("--tagger", o.tagger, "Tagger model; tags the input before parsing");
  parse_cmd->add_option("--lang", o.lang, "Language code of the input");
  parse_cmd->add_option("--out", o.out, "Output file (default: stdout)");

  auto* eval = app.add_subcommand("eval", "LAS/UAS of predicted against gold trees");
  eval->add_option("--gold", o.gold, "Gold CoNLL-X")->required();
  eval->add_option("--pred", o.pred, "Predicted CoNLL-X")->required();
  eval->add_flag("--exclude-punct", o.exclude_punct, "Do not score punctuation tokens");
  eval->add_option("--format", o.format, "text or tsv");
  eval->add_option("--out", o.out, "Output file (default: stdout)");

  auto* compare = app.add_subcommand("compare", "Randomized significance test between two parser outputs");
  compare->add_option("--gold", o.gold, "Gold CoNLL-X")->required();
  compare->add_option("--pred-a", o.pred_a, "Output of system A")->required();
  compare->add_option("--pred-b", o.pred_b, "Output of system B")->required();
  compare->add_option("--metric", o.metric, "las or uas");
  compare->add_option("--iterations", o.iterations, "Shuffles when sampling (default 10000)");
  seed_options[compare] = compare->add_option("--seed", o.seed, "Random seed (default $POLYPARSE_SEED or 1)");
  compare->add_flag("--exclude-punct", o.exclude_punct, "Do not score punctuation tokens");
  compare->add_option("--out", o.out, "Output file (default: stdout)");

  auto* bh = app.add_subcommand("bh", "Benjamini-Hochberg correction over a list of p-values");
  bh->add_option("--pvalues", o.pvalues, "One p-value per line, optionally 'label<TAB>p'")->required();
  bh->add_option("--q", o.q, "False discovery rate (default 0.2)");
  bh->add_option("--out", o.out, "Output file (default: stdout)");

  auto* tag_train = app.add_subcommand("tag-train", "Train a part-of-speech tagger");
  tag_train->add_option("--train", o.train, "Training file(s); several are merged")->required();
  tag_train->add_option("--dev", o.dev, "Development file(s)")->required();
  tag_train->add_option("--lang", o.langs, "Language code per --train/--dev file");
  tag_train->add_option("--column", o.column, "cpostag or postag");
  tag_train->add_option("--epochs", o.epochs, "Training epochs (default 10)");
  seed_options[tag_train] = tag_train->add_option("--seed", o.seed, "Random seed (default $POLYPARSE_SEED or 1)");
  tag_train->add_flag("--repair-roots", o.repair, "Attach extra roots to the first root");
  tag_train->add_option("--out", o.out, "Model file")->required();

  auto* tag_cmd = app.add_subcommand("tag", "Tag a CoNLL-X file");
  tag_cmd->add_option("--model", o.model, "Tagger model")->required();
  tag_cmd->add_option("--input", o.input, "Input CoNLL-X")->required();
  tag_cmd->add_option("--lang", o.lang, "Language code of the input");
  tag_cmd->add_option("--out", o.out, "Output file (default: stdout)");

  auto* tag_eval = app.add_subcommand("tag-eval", "Tagging accuracy of predicted against gold tags");
  tag_eval->add_option("--gold", o.gold, "Gold CoNLL-X")->required();
  tag_eval->add_option("--pred", o.pred, "Tagged CoNLL-X")->required();
  tag_eval->add_option("--column", o.column, "cpostag or postag");
  tag_eval->add_option("--out", o.out, "Output file (default: stdout)");

  auto* grid = app.add_subcommand("grid", "Monolingual and bilingual models for every language pair");
  grid->add_option("--treebanks", o.treebanks, "Directory with <lang>/{train,dev,test}.conll")->required();
  grid->add_option("--pairs", o.pairs, "'all' or a comma-separated language list");
  grid->add_option("--system", o.system, "arc-eager or arc-standard");
  grid->add_option("--tags", o.tags, "fine or universal");
  grid->add_flag("--prefix-lang", o.prefix, "Prefix tags with the sentence language");
  grid->add_option("--epochs", o.epochs, "Training epochs (default 15)");
  seed_options[grid] = grid->add_option("--seed", o.seed, "Random seed (default $POLYPARSE_SEED or 1)");
  grid->add_option("--iterations", o.iterations, "Comparator shuffles (default 10000)");
  grid->add_option("--jobs", o.jobs, "Models trained concurrently (default 1)");
  grid->add_flag("--exclude-punct", o.exclude_punct, "Do not score punctuation tokens");
  grid->add_flag("--repair-roots", o.repair, "Attach extra roots to the first root");
  grid->add_option("--out", o.out, "Report file; the TSV goes to <out>.tsv (default: stdout)");

  auto* toy = app.add_subcommand("toy", "Generate a synthetic toy treebank");
  toy->add_option("--lang", o.toy, "aa, bb or mixed");
  toy->add_option("--sentences", o.sentences, "Number of sentences (default 200)");
  seed_options[toy] = toy->add_option("--seed", o.seed, "Random seed (default $POLYPARSE_SEED or 1)");
  toy->add_flag("--no-lexical-pp", o.no_lexical_pp, "Attach every PP to the verb");
  toy->add_option("--out", o.out, "Output file (default: stdout)");

  auto* rerun = app.add_subcommand("rerun", "Repeat a run from its manifest and verify identical outputs");
  rerun->add_option("--manifest", o.manifest, "A .manifest.json written by an earlier run")->required();

  try {
    std::vector<std::string> reversed(args.rbegin(), args.rend());
    app.parse(reversed);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kExitOk : kExitUsage;
  }

  CLI::App* sub = app.get_subcommands().front();
  if (sub == rerun) {
    cmd_rerun(o, out, err);
    return kExitOk;
  }

  RunManifest manifest;
  manifest.subcommand = sub->get_name();
  manifest.argv = args;
  for (const CLI::Option* opt : sub->get_options()) {
    if (opt->count() > 0) manifest.flags[opt->get_name()] = opt->results();
  }
  if (auto it = seed_options.find(sub); it != seed_options.end()) {
    manifest.seed = o.seed;
    if (it->second->count() == 0) {
      manifest.argv.push_back("--seed");
      manifest.argv.push_back(std::to_string(o.seed));
      manifest.flags["--seed"] = {std::to_string(o.seed)};
    }
  }

  Session session(out);
  if (sub == merge) cmd_merge(session, o);
  if (sub == analyze) cmd_analyze_tags(session, o);
  if (sub == train) cmd_train(session, o, err);
  if (sub == parse_cmd) cmd_parse(session, o);
  if (sub == eval) cmd_eval(session, o);
  if (sub == compare) cmd_compare(session, o);
  if (sub == bh) cmd_bh(session, o);
  if (sub == tag_train) cmd_tag_train(session, o, err);
  if (sub == tag_cmd) cmd_tag(session, o);
  if (sub == tag_eval) cmd_tag_eval(session, o);
  if (sub == grid) cmd_grid(session, o, err);
  if (sub == toy) cmd_toy(session, o);
  session.commit(std::move(manifest));
  return kExitOk;
}

}  // namespace

int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  try {
    return dispatch(args, out, err);
  } catch (const UsageError& e) {
    err << "usage error: " << e.what() << '\n';
    return kExitUsage;
  } catch (const DataError& e) {
    err << "error: " << e.what() << '\n';
    return kExitData;
  } catch (const fs::filesystem_error& e) {
    err << "error: " << e.what() << '\n';
    return kExitData;
  } catch (const InvariantError& e) {
    err << "internal error: " << e.what() << '\n';
    return kExitInternal;
  } catch (const std::exception& e) {
    err << "internal error: " << e.what() << '\n';
    return kExitInternal;
  }
}

}  // namespace polyparse
