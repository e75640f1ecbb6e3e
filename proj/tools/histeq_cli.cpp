// histeq: batch front end for the contrast-enhancement library.
//
// Exit status: 0 success, 1 usage or configuration error, 2 when one or more
// inputs failed (the others are still processed and reported).

#include <algorithm>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <iterator>
#include <string>
#include <thread>
#include <vector>

#include <CLI11.hpp>

#include "histeq/histeq.hpp"
#include "histeq/png.hpp"

namespace fs = std::filesystem;
using namespace histeq;

namespace {

constexpr int kExitOk = 0;
constexpr int kExitUsage = 1;
constexpr int kExitPartial = 2;

struct ParamOptions {
  std::string method = "hkmdhe";
  double tau = EnhanceParams::kDefaultTau;
  std::string gamma = "0.75";
  std::string mm_scale = "native";
  std::string tiles = "8x8";
  std::string clip = "2.0";
  std::string peak_mode = "max-of-output";
  std::string on_constant = "error";

  EnhanceParams resolve() const {
    EnhanceParams p;
    p.method = parse_method(method);
    p.tau = tau;
    if (gamma == "search") {
      p.gamma.reset();
    } else {
      p.gamma = parse_number(gamma, "gamma");
    }
    p.mm_scale = parse_mm_scale(mm_scale);
    const auto x = tiles.find('x');
    if (x == std::string::npos) {
      throw std::invalid_argument("tiles must look like 8x8");
    }
    p.clahe.tiles_x = int(parse_number(tiles.substr(0, x), "tiles"));
    p.clahe.tiles_y = int(parse_number(tiles.substr(x + 1), "tiles"));
    p.clahe.clip_limit = (clip == "inf" || clip == "none")
                             ? std::numeric_limits<double>::infinity()
                             : parse_number(clip, "clip");
    p.peak_mode = parse_peak_mode(peak_mode);
    p.on_constant = parse_on_constant(on_constant);
    validate(p);
    return p;
  }

  static double parse_number(const std::string& s, const char* what) {
    std::size_t used = 0;
    double v = 0.0;
    try {
      v = std::stod(s, &used);
    } catch (const std::exception&) {
      used = 0;
    }
    if (used != s.size() || s.empty()) {
      throw std::invalid_argument(std::string(what) + ": not a number: '" + s +
                                  "'");
    }
    return v;
  }
};

void add_param_options(CLI::App* cmd, ParamOptions& o, bool with_method) {
  if (with_method) {
    cmd->add_option("--method", o.method, "he | clahe | hkmdhe")
        ->check(CLI::IsMember({"he", "clahe", "hkmdhe"}))
        ->capture_default_str();
  }
  cmd->add_option("--tau", o.tau, "hyper-kurtosis threshold")
      ->capture_default_str();
  cmd->add_option("--gamma", o.gamma, "power-law exponent in [0,1], or 'search'")
      ->capture_default_str();
  cmd->add_option("--mm-scale", o.mm_scale, "native | normalized")
      ->check(CLI::IsMember({"native", "normalized"}))
      ->capture_default_str();
  cmd->add_option("--tiles", o.tiles, "CLAHE tile grid, e.g. 8x8")
      ->capture_default_str();
  cmd->add_option("--clip", o.clip, "CLAHE clip limit (> 1, or 'inf')")
      ->capture_default_str();
  cmd->add_option("--peak-mode", o.peak_mode, "max-of-output | fixed255")
      ->check(CLI::IsMember({"max-of-output", "fixed255"}))
      ->capture_default_str();
  cmd->add_option("--on-constant", o.on_constant, "error | passthrough")
      ->check(CLI::IsMember({"error", "passthrough"}))
      ->capture_default_str();
}

std::vector<std::uint8_t> read_bytes(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  if (!in) throw std::runtime_error(p.string() + ": cannot open");
  return {std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
}

void write_bytes(const fs::path& p, std::string_view bytes) {
  std::ofstream out(p, std::ios::binary | std::ios::trunc);
  if (!out) throw std::runtime_error(p.string() + ": cannot write");
  out.write(bytes.data(), std::streamsize(bytes.size()));
  if (!out) throw std::runtime_error(p.string() + ": write failed");
}

void write_bytes(const fs::path& p, const std::vector<std::uint8_t>& bytes) {
  write_bytes(p, std::string_view(reinterpret_cast<const char*>(bytes.data()),
                                  bytes.size()));
}

GrayImage load_image(const fs::path& p) {
  if (p.extension() == ".png") return read_png(p.string());
  try {
    return read_pgm(read_bytes(p));
  } catch (const PgmError& e) {
    throw std::runtime_error(p.string() + ": " + e.what());
  }
}

void ensure_dir(const fs::path& dir) {
  std::error_code ec;
  fs::create_directories(dir, ec);
  if (ec || !fs::is_directory(dir)) {
    throw std::runtime_error(dir.string() + ": cannot create output directory");
  }
}

std::size_t job_count(int requested) {
  const std::size_t hw = std::max(1u, std::thread::hardware_concurrency());
  return effective_threads(requested > 0 ? std::size_t(requested) : hw);
}

struct FileOutcome {
  std::vector<RunRecord> records;
  std::string error;
};

// Runs every method for one input; the record's output path is set only when
// an image was written.
FileOutcome process_file(const std::string& input,
                         const std::vector<EnhanceParams>& runs,
                         const std::optional<fs::path>& out_dir,
                         const std::string& format) {
  FileOutcome o;
  try {
    const auto img = load_image(input);
    for (const auto& params : runs) {
      auto enhanced = enhance(img, params);
      RunRecord r;
      r.input = input;
      r.params = params;
      r.split = enhanced.split;
      r.passthrough = enhanced.passthrough;
      r.metrics = evaluate(img, enhanced.image, params);
      if (out_dir) {
        const auto name = fs::path(input).stem().string() + "." +
                          std::string(to_string(params.method)) + "." + format;
        const auto path = *out_dir / name;
        if (format == "png") {
          write_png(path.string(), enhanced.image);
        } else {
          write_bytes(path, write_pgm(enhanced.image));
        }
        r.output = path.string();
      }
      o.records.push_back(std::move(r));
    }
  } catch (const std::exception& e) {
    o.error = e.what();
    if (o.error.rfind(input, 0) != 0) o.error = input + ": " + o.error;
    o.records.clear();
  }
  return o;
}

// Processes inputs in lexicographic order, in parallel, and collects records
// in that order. Returns the number of failed inputs.
std::size_t run_batch(std::vector<std::string> inputs,
                      const std::vector<EnhanceParams>& runs,
                      const std::optional<fs::path>& out_dir,
                      const std::string& format, int jobs,
                      std::vector<RunRecord>& records) {
  std::sort(inputs.begin(), inputs.end());
  std::vector<FileOutcome> outcomes(inputs.size());
  parallel_for(inputs.size(), job_count(jobs), [&](std::size_t i) {
    outcomes[i] = process_file(inputs[i], runs, out_dir, format);
  });
  std::size_t failed = 0;
  for (auto& o : outcomes) {
    if (!o.error.empty()) {
      std::cerr << "error: " << o.error << "\n";
      ++failed;
      continue;
    }
    for (auto& r : o.records) records.push_back(std::move(r));
  }
  return failed;
}

void write_reports(const fs::path& dir, const std::string& stem,
                   const std::vector<RunRecord>& records) {
  write_bytes(dir / (stem + ".json"), write_report_json(records));
  write_bytes(dir / (stem + ".csv"), write_report_csv(records));
}

int cmd_enhance(const std::vector<std::string>& inputs, const ParamOptions& po,
                const std::string& out, const std::string& format, int jobs) {
  const auto params = po.resolve();
  const fs::path dir(out);
  ensure_dir(dir);
  std::vector<RunRecord> records;
  const auto failed = run_batch(inputs, {params}, dir, format, jobs, records);
  if (!records.empty()) write_reports(dir, "report", records);
  return failed ? kExitPartial : kExitOk;
}

int cmd_compare(const std::vector<std::string>& inputs, const ParamOptions& po,
                const std::string& out, int jobs) {
  auto clahe = po.resolve();
  clahe.method = Method::Clahe;
  auto hkmdhe = clahe;
  hkmdhe.method = Method::Hkmdhe;

  std::optional<fs::path> dir;
  if (!out.empty()) {
    dir = fs::path(out);
    ensure_dir(*dir);
  }
  std::vector<RunRecord> records;
  const auto failed =
      run_batch(inputs, {clahe, hkmdhe}, std::nullopt, "pgm", jobs, records);
  if (records.empty()) {
    std::cerr << "error: no input could be processed\n";
    return kExitPartial;
  }
  const auto summary = summarize_records(records);
  std::cout << format_table(summary);
  for (const auto& [m, s] : summary) {
    if (s.psnr_infinite_excluded) {
      std::cout << "note: " << to_string(m) << ": " << s.psnr_infinite_excluded
                << " infinite PSNR value(s) excluded\n";
    }
    if (s.ammbe_undefined_excluded) {
      std::cout << "note: " << to_string(m) << ": " << s.ammbe_undefined_excluded
                << " undefined AMMBE value(s) excluded\n";
    }
  }
  const auto& c = summary.at(Method::Clahe).ammbe.mean;
  const auto& h = summary.at(Method::Hkmdhe).ammbe.mean;
  if (h > 0.0) std::cout << "AMMBE ratio CLAHE/HKMDHE: " << c / h << "\n";
  std::cout << "samples: " << summary.at(Method::Hkmdhe).count
            << "  (± is one population standard deviation)\n";
  if (dir) write_reports(*dir, "compare", records);
  return failed ? kExitPartial : kExitOk;
}

int cmd_stats(const std::string& input, const ParamOptions& po, bool json) {
  auto params = po.resolve();
  const auto img = load_image(input);
  MomentStats m;
  SplitDecision d;
  try {
    m = moment_stats(img);
    d = select_split(img, params);
  } catch (const DegenerateImageError& e) {
    std::cerr << "error: " << input << ": " << e.what()
              << " (hyper-kurtosis undefined)\n";
    return kExitPartial;
  }
  if (json) {
    nlohmann::json j = {{"input", input},
                        {"moments", {{"mean", m.mean}, {"sigma", m.sigma}, {"beta", m.beta}}},
                        {"split", to_json(d)},
                        {"params", to_json(params)},
                        {"tool_version", kToolVersion}};
    std::cout << j.dump(2) << "\n";
    return kExitOk;
  }
  std::cout << "input        " << input << "\n"
            << "mean         " << m.mean << "\n"
            << "sigma        " << m.sigma << "\n"
            << "beta         " << m.beta << "\n"
            << "branch       " << to_string(d.branch) << "\n"
            << "gamma_used   "
            << (d.gamma_used ? std::to_string(*d.gamma_used) : "-") << "\n"
            << "mm_raw       " << d.mm_raw << "\n"
            << "split_level  " << d.split_level << "\n";
  return kExitOk;
}

int cmd_phantoms(const std::string& manifest, const std::string& out,
                 bool dump, int jobs) {
  if (dump) {
    std::cout << manifest_to_json(default_corpus()).dump(2) << "\n";
    return kExitOk;
  }
  std::vector<PhantomSpec> specs;
  if (manifest.empty()) {
    specs = default_corpus();
  } else {
    try {
      const auto bytes = read_bytes(manifest);
      specs = manifest_from_json(
          nlohmann::json::parse(std::string(bytes.begin(), bytes.end())));
    } catch (const std::exception& e) {
      std::cerr << "error: " << manifest << ": " << e.what() << "\n";
      return kExitUsage;
    }
  }
  if (out.empty()) {
    std::cerr << "error: --output is required\n";
    return kExitUsage;
  }
  const fs::path dir(out);
  ensure_dir(dir);
  const auto images = generate_corpus(specs, job_count(jobs));
  for (std::size_t i = 0; i < specs.size(); ++i) {
    write_bytes(dir / (specs[i].name + ".pgm"), write_pgm(images[i]));
  }
  std::cout << "wrote " << images.size() << " phantoms to " << dir.string()
            << "\n";
  return kExitOk;
}

// Re-runs every record of a report and checks the result against the image
// the record points at.
int cmd_replay(const std::string& report, const std::string& out) {
  const auto bytes = read_bytes(report);
  const auto records = read_report_json(std::string(bytes.begin(), bytes.end()));
  std::optional<fs::path> dir;
  if (!out.empty()) {
    dir = fs::path(out);
    ensure_dir(*dir);
  }
  std::size_t mismatched = 0;
  for (const auto& r : records) {
    try {
      const auto img = load_image(r.input);
      const auto redone = write_pgm(enhance(img, r.params).image);
      if (dir) {
        const auto name = fs::path(r.input).stem().string() + "." +
                          std::string(to_string(r.params.method)) + ".pgm";
        write_bytes(*dir / name, redone);
      }
      if (r.output.empty()) continue;
      const bool same = fs::path(r.output).extension() == ".png"
                            ? read_png(r.output) == read_pgm(redone)
                            : read_bytes(r.output) == redone;
      std::cout << (same ? "match    " : "MISMATCH ") << r.output << "\n";
      mismatched += !same;
    } catch (const std::exception& e) {
      std::cerr << "error: " << r.input << ": " << e.what() << "\n";
      ++mismatched;
    }
  }
  return mismatched ? kExitPartial : kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Grayscale contrast enhancement: HE, CLAHE and HKMDHE"};
  app.set_version_flag("--version", std::string(kToolVersion));
  app.require_subcommand(1);

  ParamOptions enhance_opts;
  std::vector<std::string> enhance_inputs;
  std::string enhance_out;
  std::string enhance_format = "pgm";
  int enhance_jobs = 0;
  auto* enhance_cmd = app.add_subcommand("enhance", "enhance images and write <stem>.<method>.<fmt>");
  add_param_options(enhance_cmd, enhance_opts, true);
  enhance_cmd->add_option("inputs", enhance_inputs, "PGM or PNG inputs")->required();
  enhance_cmd->add_option("-o,--output", enhance_out, "output directory")->required();
  enhance_cmd->add_option("--format", enhance_format, "pgm | png")
      ->check(CLI::IsMember({"pgm", "png"}));
  enhance_cmd->add_option("-j,--jobs", enhance_jobs, "parallel workers (0: all cores)");

  ParamOptions compare_opts;
  std::vector<std::string> compare_inputs;
  std::string compare_out;
  int compare_jobs = 0;
  auto* compare_cmd = app.add_subcommand("compare", "CLAHE vs HKMDHE: PSNR and AMMBE table");
  add_param_options(compare_cmd, compare_opts, false);
  compare_cmd->add_option("inputs", compare_inputs, "PGM or PNG inputs")->required();
  compare_cmd->add_option("-o,--output", compare_out, "directory for compare.json / compare.csv");
  compare_cmd->add_option("-j,--jobs", compare_jobs, "parallel workers (0: all cores)");

  ParamOptions stats_opts;
  std::string stats_input;
  bool stats_json = false;
  auto* stats_cmd = app.add_subcommand("stats", "moments, hyper-kurtosis and split decision");
  add_param_options(stats_cmd, stats_opts, false);
  stats_cmd->add_option("input", stats_input, "PGM or PNG input")->required();
  stats_cmd->add_flag("--json", stats_json, "print a JSON record");

  std::string manifest;
  std::string phantom_out;
  bool dump_manifest = false;
  int phantom_jobs = 0;
  auto* phantoms_cmd = app.add_subcommand("phantoms", "write the synthetic phantom corpus");
  phantoms_cmd->add_option("manifest", manifest, "manifest JSON (default: built-in corpus)");
  phantoms_cmd->add_option("-o,--output", phantom_out, "output directory");
  phantoms_cmd->add_flag("--dump-manifest", dump_manifest, "print the built-in manifest");
  phantoms_cmd->add_option("-j,--jobs", phantom_jobs, "parallel workers (0: all cores)");

  std::string replay_report;
  std::string replay_out;
  auto* replay_cmd = app.add_subcommand("replay", "re-run a report's records and verify outputs");
  replay_cmd->add_option("report", replay_report, "report.json")->required();
  replay_cmd->add_option("-o,--output", replay_out, "directory for regenerated images");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kExitOk : kExitUsage;
  }

  try {
    if (*enhance_cmd) {
      return cmd_enhance(enhance_inputs, enhance_opts, enhance_out,
                         enhance_format, enhance_jobs);
    }
    if (*compare_cmd) {
      return cmd_compare(compare_inputs, compare_opts, compare_out, compare_jobs);
    }
    if (*stats_cmd) return cmd_stats(stats_input, stats_opts, stats_json);
    if (*phantoms_cmd) {
      return cmd_phantoms(manifest, phantom_out, dump_manifest, phantom_jobs);
    }
    if (*replay_cmd) return cmd_replay(replay_report, replay_out);
  } catch (const std::invalid_argument& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitUsage;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitPartial;
  }
  return kExitUsage;
}
