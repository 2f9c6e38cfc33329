#include "cli.hpp"

#include <chrono>
#include <cstdio>
#include <fstream>
#include <iomanip>
#include <iostream>
#include <sstream>

#include <CLI11.hpp>
#include <nlohmann/json.hpp>

#include "datasignal/classifier.hpp"
#include "datasignal/experiments.hpp"
#include "datasignal/io.hpp"
#include "datasignal/kernel.hpp"
#include "datasignal/mnist.hpp"
#include "datasignal/svg.hpp"

namespace datasignal::cli {

namespace {

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point start) {
  return std::chrono::duration<double>(Clock::now() - start).count();
}

struct FitOptions {
  std::string input;
  std::string model;
  double alpha = 1.0;
  double gamma = 1.0;
  std::string mode = "signal";
};

struct EvalOptions {
  std::string model;
  std::string queries;
  std::string output;
};

struct FigureOptions {
  std::string id;
  std::string output;
  double alpha = 1.0;
  std::uint64_t seed = 0;
  int resolution = 256;
  bool list = false;
};

struct MnistOptions {
  double alpha = 1.5;
  double gamma = 1.0;
  int k = 5;
  std::size_t limit_test = 0;
  bool no_augment = false;
  std::string cache_dir;
  std::string base_url = mnist::kDefaultBaseUrl;
  std::uint64_t seed = 0;
  std::string report;
  std::string format = "json";
  unsigned threads = 1;
  bool no_timings = false;
};

void write_text_file(const std::string& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error(ErrorCode::IoError, "cannot write " + path);
  out << text;
  if (!out) throw Error(ErrorCode::IoError, "write failed for " + path);
}

int cmd_fit(const FitOptions& o, std::ostream& out) {
  const KernelConfig config{o.gamma, o.alpha};
  config.validate();
  const CsvTable table = read_csv(o.input);
  if (table.header.size() < 2) {
    throw Error(ErrorCode::ParseError, o.input + ": need at least one coordinate column and a value column");
  }
  if (table.rows.empty()) throw Error(ErrorCode::ParseError, o.input + ": no data rows");
  const std::size_t d = table.header.size() - 1;
  const Matrix points = numeric_columns(table, 0, d);

  Signal signal = [&] {
    if (o.mode == "classifier") {
      std::vector<std::string> labels;
      for (const auto& row : table.rows) labels.push_back(row[d]);
      ClassifierModel model = fit_classifier(points, labels, config);
      save_model(o.model, model.signal(), model.class_labels());
      out << "classes: " << model.classes() << "\n";
      return model.signal();
    }
    LabeledPointSet data(points, numeric_columns(table, d, d + 1));
    Signal s = fit_signal(data, config);
    save_model(o.model, s);
    return s;
  }();

  out << "points: " << signal.size() << "\n"
      << "dim: " << signal.dim() << "\n"
      << "outputs: " << signal.outputs() << "\n"
      << "residual_inf: " << format_double(signal.residual()) << "\n"
      << "fitted_min: " << format_double(signal.fitted_values().minCoeff()) << "\n"
      << "fitted_max: " << format_double(signal.fitted_values().maxCoeff()) << "\n";
  return kSuccess;
}

int cmd_eval(const EvalOptions& o, std::ostream& out) {
  const StoredModel stored = load_model(o.model);
  const Signal& signal = stored.signal;
  const CsvTable table = read_csv(o.queries);
  if (!table.rows.empty() && static_cast<Eigen::Index>(table.header.size()) != signal.dim()) {
    throw Error(ErrorCode::DimensionMismatch, o.queries + " has " + std::to_string(table.header.size()) +
                                                  " columns, model dimension is " +
                                                  std::to_string(signal.dim()));
  }
  const Matrix queries = table.rows.empty() ? Matrix(0, signal.dim())
                                            : numeric_columns(table, 0, table.header.size());
  const Matrix values = evaluate_signal(signal, queries);

  std::ostringstream csv;
  const bool classifier = !stored.class_labels.empty();
  if (classifier) {
    csv << "label";
    for (const auto& l : stored.class_labels) csv << ",u_" << l;
  } else if (signal.outputs() == 1) {
    csv << "u";
  } else {
    for (Eigen::Index c = 0; c < signal.outputs(); ++c) csv << (c ? "," : "") << "u" << c + 1;
  }
  csv << "\n";
  const std::vector<int> best = argmax_rows(values);
  for (Eigen::Index i = 0; i < values.rows(); ++i) {
    if (classifier) csv << stored.class_labels[static_cast<std::size_t>(best[static_cast<std::size_t>(i)])] << ",";
    for (Eigen::Index c = 0; c < values.cols(); ++c) csv << (c ? "," : "") << format_double(values(i, c));
    csv << "\n";
  }
  write_text_file(o.output, csv.str());
  out << "queries: " << values.rows() << "\n";
  return kSuccess;
}

int cmd_figure(const FigureOptions& o, std::ostream& out) {
  if (o.list) {
    for (const auto& id : experiments::figure_ids()) out << id << "\n";
    return kSuccess;
  }
  if (o.id.empty() || o.output.empty()) {
    throw Error(ErrorCode::InvalidArgument, "figure needs --id and --output (or --list)");
  }
  const svg::Figure fig = experiments::build_figure(o.id, o.alpha, o.seed, o.resolution);
  svg::emit_svg(fig, o.output);
  out << "wrote " << o.output << " (" << fig.contours.size() << " contour layers)\n";
  return kSuccess;
}

nlohmann::ordered_json confusion_json(const mnist::Evaluation& e) {
  auto rows = nlohmann::ordered_json::array();
  for (const auto& r : e.confusion) rows.push_back(r);
  return rows;
}

std::string confusion_text(const mnist::Evaluation& e) {
  std::ostringstream s;
  s << "digit\\label";
  for (int j = 0; j < mnist::kDigits; ++j) s << std::setw(6) << j;
  s << "\n";
  for (int i = 0; i < mnist::kDigits; ++i) {
    s << std::setw(11) << i;
    for (int j = 0; j < mnist::kDigits; ++j) s << std::setw(6) << e.confusion[i][j];
    s << "\n";
  }
  return s.str();
}

int cmd_mnist(const MnistOptions& o, std::ostream& out, std::ostream& err) {
  const KernelConfig config{o.gamma, o.alpha};
  config.validate();
  if (o.format != "json" && o.format != "text") {
    throw Error(ErrorCode::InvalidArgument, "--format must be json or text");
  }
  const auto t0 = Clock::now();
  const std::filesystem::path cache = o.cache_dir.empty() ? mnist::default_cache_dir() : std::filesystem::path(o.cache_dir);
  const mnist::MnistFiles files = mnist::fetch_mnist(cache, o.base_url);
  mnist::MnistSet train_set = mnist::load_mnist(files.train_images, files.train_labels);
  mnist::MnistSet test_set = mnist::load_mnist(files.test_images, files.test_labels);
  const double load_s = seconds_since(t0);

  const auto t1 = Clock::now();
  if (!o.no_augment) train_set = mnist::augment(train_set);
  const mnist::FeatureMatrix train = mnist::normalize(std::move(train_set));
  if (o.limit_test) test_set = test_set.head(o.limit_test);
  const mnist::FeatureMatrix test = mnist::normalize(std::move(test_set));
  const double prepare_s = seconds_since(t1);
  err << "training rows: " << train.size() << ", test rows: " << test.size() << "\n";

  const auto t2 = Clock::now();
  mnist::RunOptions run_options;
  run_options.config = config;
  run_options.k = o.k;
  run_options.threads = o.threads;
  const mnist::RunResult result = mnist::run(train, test, run_options);
  const double classify_s = seconds_since(t2);

  const mnist::Evaluation signal_eval = mnist::evaluate_run(result.predictions, result.truth);
  const mnist::Evaluation nn_eval = mnist::evaluate_run(result.nn_predictions, result.truth);

  std::string report;
  if (o.format == "json") {
    nlohmann::ordered_json doc;
    doc["accuracy"] = signal_eval.accuracy;
    doc["confusion"] = confusion_json(signal_eval);
    doc["nn_baseline"] = {{"accuracy", nn_eval.accuracy}, {"confusion", confusion_json(nn_eval)}};
    doc["config"] = {{"alpha", o.alpha},       {"gamma", o.gamma},
                     {"k", o.k},               {"augment", !o.no_augment},
                     {"limit_test", o.limit_test}, {"seed", o.seed},
                     {"train_size", train.size()}, {"test_size", test.size()}};
    doc["max_local_residual"] = result.max_residual;
    if (!o.no_timings) {
      doc["timings"] = {{"load_s", load_s},
                        {"prepare_s", prepare_s},
                        {"classify_s", classify_s},
                        {"total_s", seconds_since(t0)}};
    }
    report = doc.dump(2) + "\n";
  } else {
    std::ostringstream s;
    char line[128];
    std::snprintf(line, sizeof(line), "accuracy: %.4f (%zu test images)\n", signal_eval.accuracy,
                  signal_eval.total);
    s << line;
    std::snprintf(line, sizeof(line), "1-NN baseline accuracy: %.4f\n", nn_eval.accuracy);
    s << line;
    s << "alpha=" << format_double(o.alpha) << " gamma=" << format_double(o.gamma) << " k=" << o.k
      << " augment=" << (o.no_augment ? "no" : "yes") << "\n\n";
    s << confusion_text(signal_eval);
    if (!o.no_timings) {
      std::snprintf(line, sizeof(line), "\ntime: %.1f s total, %.1f s classifying\n", seconds_since(t0),
                    classify_s);
      s << line;
    }
    report = s.str();
  }
  if (o.report.empty()) {
    out << report;
  } else {
    write_text_file(o.report, report);
    char line[96];
    std::snprintf(line, sizeof(line), "accuracy %.4f, 1-NN %.4f\n", signal_eval.accuracy, nn_eval.accuracy);
    out << line;
  }
  return kSuccess;
}

}  // namespace

int exit_code_for(ErrorCode code) {
  switch (code) {
    case ErrorCode::InvalidArgument:
    case ErrorCode::InvalidRate:
    case ErrorCode::SingleClass:
    case ErrorCode::WrongClassCount:
      return kUsage;
    case ErrorCode::SingularSystem:
      return kNumeric;
    case ErrorCode::IoError:
    case ErrorCode::NetworkError:
      return kNetworkIo;
    case ErrorCode::DimensionMismatch:
    case ErrorCode::IncompatibleSignals:
    case ErrorCode::NotSPD:
    case ErrorCode::BadMagic:
    case ErrorCode::TruncatedFile:
    case ErrorCode::ZeroImage:
    case ErrorCode::InsufficientClassMembers:
    case ErrorCode::LengthMismatch:
    case ErrorCode::ParseError:
    case ErrorCode::ChecksumMismatch:
      return kData;
  }
  return kData;
}

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Laplace-kernel data signals: fit, evaluate, 2D figures and MNIST classification"};
  app.name(args.empty() ? "datasignal" : args.front());
  app.set_config("--config", "", "TOML file providing defaults for any flag (command-line flags win)");
  app.require_subcommand(1);
  app.footer(
      "Exit codes: 0 success, 2 usage, 3 data/parse, 4 numeric (singular system), 5 network/io.\n"
      "Environment: DATASIGNAL_CACHE_DIR overrides the MNIST cache directory.");

  FitOptions fit;
  auto* fit_cmd = app.add_subcommand("fit", "Fit a signal or one-vs-rest classifier to a CSV data set");
  fit_cmd->add_option("--input,-i", fit.input, "CSV with header x1,...,xd,value (or label)")->required();
  fit_cmd->add_option("--model,-o", fit.model, "Output JSON model")->required();
  fit_cmd->add_option("--alpha", fit.alpha, "Regularization alpha >= 0")->capture_default_str();
  fit_cmd->add_option("--gamma", fit.gamma, "Kernel bandwidth gamma > 0")->capture_default_str();
  fit_cmd->add_option("--mode", fit.mode, "signal: last column is a real value; classifier: a label")
      ->check(CLI::IsMember({"signal", "classifier"}))
      ->capture_default_str();

  EvalOptions ev;
  auto* eval_cmd = app.add_subcommand("eval", "Evaluate a saved model at query points");
  eval_cmd->add_option("--model,-m", ev.model, "JSON model from `fit`")->required();
  eval_cmd->add_option("--queries,-q", ev.queries, "CSV with header x1,...,xd")->required();
  eval_cmd->add_option("--output,-o", ev.output, "Output CSV of values (and labels)")->required();

  FigureOptions fig;
  auto* fig_cmd = app.add_subcommand("figure", "Render one of the 2D experiments as SVG");
  fig_cmd->add_option("--id", fig.id, "Experiment id (see --list)");
  fig_cmd->add_option("--output,-o", fig.output, "Output SVG path");
  fig_cmd->add_option("--alpha", fig.alpha, "Regularization alpha")->capture_default_str();
  fig_cmd->add_option("--seed", fig.seed, "Seed for corruption and sampling")->capture_default_str();
  fig_cmd->add_option("--resolution", fig.resolution, "Evaluation raster side over [-1,1]^2")
      ->check(CLI::Range(2, 4096))
      ->capture_default_str();
  fig_cmd->add_flag("--list", fig.list, "List experiment ids and exit");

  MnistOptions mn;
  auto* mnist_cmd = app.add_subcommand("mnist", "Classify MNIST test digits with local per-class signals");
  mnist_cmd->add_option("--alpha", mn.alpha, "Regularization alpha")->capture_default_str();
  mnist_cmd->add_option("--gamma", mn.gamma, "Kernel bandwidth gamma")->capture_default_str();
  mnist_cmd->add_option("--k", mn.k, "Neighbours per digit class")->check(CLI::PositiveNumber)->capture_default_str();
  mnist_cmd->add_option("--limit-test", mn.limit_test, "Classify only the first N test images (0 = all)")
      ->capture_default_str();
  mnist_cmd->add_flag("--no-augment", mn.no_augment, "Use the 60,000 original training images only");
  mnist_cmd->add_option("--cache-dir", mn.cache_dir, "Directory holding the four IDX files")
      ->envname("DATASIGNAL_CACHE_DIR");
  mnist_cmd->add_option("--base-url", mn.base_url, "Download location for missing files")->capture_default_str();
  mnist_cmd->add_option("--seed", mn.seed, "Recorded in the report; the pipeline draws no random numbers")
      ->capture_default_str();
  mnist_cmd->add_option("--report", mn.report, "Write the report to this file instead of stdout");
  mnist_cmd->add_option("--format", mn.format, "Report format: json or text")
      ->check(CLI::IsMember({"json", "text"}))
      ->capture_default_str();
  mnist_cmd->add_option("--threads", mn.threads, "Worker threads for test queries")
      ->check(CLI::Range(1u, 1024u))
      ->capture_default_str();
  mnist_cmd->add_flag("--no-timings", mn.no_timings, "Omit wall-clock timings from the report");

  std::string fetch_dir;
  std::string fetch_url = mnist::kDefaultBaseUrl;
  auto* fetch_cmd = app.add_subcommand("fetch-mnist", "Download the MNIST IDX files into the cache");
  fetch_cmd->add_option("--cache-dir", fetch_dir, "Target directory")->envname("DATASIGNAL_CACHE_DIR");
  fetch_cmd->add_option("--base-url", fetch_url, "Download location")->capture_default_str();

  std::vector<const char*> argv;
  for (const auto& a : args) argv.push_back(a.c_str());
  try {
    app.parse(static_cast<int>(argv.size()), argv.data());
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kSuccess : kUsage;
  }

  try {
    if (fit_cmd->parsed()) return cmd_fit(fit, out);
    if (eval_cmd->parsed()) return cmd_eval(ev, out);
    if (fig_cmd->parsed()) return cmd_figure(fig, out);
    if (mnist_cmd->parsed()) return cmd_mnist(mn, out, err);
    if (fetch_cmd->parsed()) {
      const auto files = mnist::fetch_mnist(fetch_dir.empty() ? mnist::default_cache_dir() : std::filesystem::path(fetch_dir), fetch_url);
      out << files.train_images.parent_path().string() << "\n";
      return kSuccess;
    }
  } catch (const Error& e) {
    err << "error: " << e.what() << "\n";
    return exit_code_for(e.code());
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return kNetworkIo;
  }
  return kUsage;
}

}  // namespace datasignal::cli
