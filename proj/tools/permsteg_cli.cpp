// permsteg: embed, extract, analyze, experiment.
//
// Exit codes: 0 ok, 1 I/O or malformed input, 2 capacity exceeded,
// 3 distortion constraint infeasible.

#include <cmath>
#include <fstream>
#include <iostream>
#include <limits>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "permsteg/analysis.hpp"
#include "permsteg/experiment.hpp"
#include "permsteg/host_io.hpp"
#include "permsteg/selector.hpp"
#include "permsteg/stego.hpp"

namespace {

using namespace permsteg;

enum ExitCode { kOk = 0, kIo = 1, kCapacity = 2, kInfeasible = 3 };

struct CodingOptions {
  std::string host;
  std::string out;
  std::string kappa;
  std::string key;
  std::size_t key_stages = 1;
  std::string seq = "uniform";
  std::string format;
  int value_bits = 8;
};

void add_coding_options(CLI::App* cmd, CodingOptions& o) {
  cmd->add_option("--kappa", o.kappa,
                  "Minimum host to watermark power ratio, linear or with a 'db' suffix");
  cmd->add_option("--key", o.key, "Passphrase for the stego key");
  cmd->add_option("--key-stages", o.key_stages, "Number of key permutations")->check(CLI::PositiveNumber);
  cmd->add_option("--seq", o.seq, "Partitioning sequence")->check(CLI::IsMember({"uniform", "lsb"}));
  cmd->add_option("--format", o.format, "Host format, overriding the file extension")
      ->check(CLI::IsMember({"i32", "txt"}));
  cmd->add_option("--value-bits", o.value_bits, "Nominal sample bit depth")->check(CLI::Range(1, 31));
}

std::optional<HostFormat> format_of(const CodingOptions& o) {
  if (o.format.empty()) return std::nullopt;
  return parse_host_format(o.format);
}

StegoConfig config_of(const CodingOptions& o) {
  StegoConfig cfg;
  cfg.constraint.sequence = parse_sequence_family(o.seq);
  // Without a constraint any partitioning is acceptable; p = 1 then wins.
  cfg.constraint.kappa =
      o.kappa.empty() ? std::numeric_limits<double>::min() : parse_kappa(o.kappa);
  if (!o.key.empty()) cfg.passphrase = o.key;
  cfg.key_stages = o.key_stages;
  cfg.value_bits = o.value_bits;
  return cfg;
}

std::vector<double> parse_grid(const std::string& text) {
  std::vector<double> grid;
  if (text.empty()) return grid;
  if (text.find(':') != std::string::npos) {
    double lo = 0.0, hi = 0.0, step = 0.0;
    char c1 = 0, c2 = 0;
    std::istringstream in(text);
    if (!(in >> lo >> c1 >> hi >> c2 >> step) || c1 != ':' || c2 != ':' || !(step > 0.0) || hi < lo) {
      throw Error("invalid grid: " + text + " (expected start:stop:step)");
    }
    const auto count = static_cast<long>(std::floor((hi - lo) / step + 1e-9)) + 1;
    for (long k = 0; k < count; ++k) grid.push_back(lo + static_cast<double>(k) * step);
    return grid;
  }
  std::istringstream in(text);
  for (std::string item; std::getline(in, item, ',');) {
    try {
      grid.push_back(std::stod(item));
    } catch (const std::exception&) {
      throw Error("invalid grid value: " + item);
    }
  }
  if (grid.empty()) throw Error("empty grid");
  return grid;
}

int run_embed(const CodingOptions& o, const std::string& msg_path) {
  const auto x = read_host(o.host, format_of(o));
  const Bits message = bytes_to_bits(read_bytes(msg_path));
  const StegoConfig cfg = config_of(o);
  const EmbedResult r = embed(x, message, cfg);
  write_host(o.out, r.stego, format_of(o).value_or(format_from_path(o.out)));
  std::cout << "capacity,message_bits,rho_emp,p,p_effective,xi_emp,xi_emp_db,nu_emp\n"
            << r.capacity << ',' << message.size() << ','
            << format_number(static_cast<double>(r.capacity) / static_cast<double>(x.size())) << ','
            << r.selection.requested_p << ',' << r.selection.effective_p() << ','
            << format_number(r.empirical.xi) << ',' << format_number(to_db(r.empirical.xi)) << ','
            << format_number(r.empirical.nu) << '\n';
  return kOk;
}

int run_extract(const CodingOptions& o) {
  const auto y = read_host(o.host, format_of(o));
  const ExtractResult r = extract(y, config_of(o));
  write_bytes(o.out, bits_to_bytes(r.message));
  std::cerr << "extracted " << r.capacity << " bits\n";
  return kOk;
}

int run_analyze(const CodingOptions& o) {
  HostSequence x{read_host(o.host, format_of(o)), o.value_bits};
  std::cout << "p_requested," << metrics_csv_header() << '\n';
  if (o.kappa.empty() && o.seq == "uniform") {
    std::cout << 1 << ',' << metrics_csv_row(analyze(x)) << '\n';
    return kOk;
  }
  const Selection s = select_partitioning(x, config_of(o).constraint);
  std::cout << s.requested_p << ',' << metrics_csv_row(s.report) << '\n';
  return kOk;
}

int run_experiment_cmd(const ExperimentConfig& cfg, const std::string& out) {
  const std::string csv = run_experiment(cfg);
  if (out.empty() || out == "-") {
    std::cout << csv;
    return kOk;
  }
  std::ofstream file(out, std::ios::binary | std::ios::trunc);
  if (!file) throw IoError("cannot open " + out + " for writing");
  file << csv;
  if (!file) throw IoError("write failed: " + out);
  return kOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Histogram-preserving steganography by permutation coding"};
  app.require_subcommand(1);

  CodingOptions embed_opts;
  std::string msg_path;
  auto* embed_cmd = app.add_subcommand("embed", "Embed a message file into a host");
  embed_cmd->add_option("--host", embed_opts.host, "Host file (.i32 or .txt)")->required();
  embed_cmd->add_option("--msg", msg_path, "Message file (raw bytes)")->required();
  embed_cmd->add_option("--out", embed_opts.out, "Stego output file")->required();
  add_coding_options(embed_cmd, embed_opts);

  CodingOptions extract_opts;
  auto* extract_cmd = app.add_subcommand("extract", "Extract the message from a stego file");
  extract_cmd->add_option("--host", extract_opts.host, "Stego file (.i32 or .txt)")->required();
  extract_cmd->add_option("--out", extract_opts.out, "Message output file")->required();
  add_coding_options(extract_cmd, extract_opts);

  CodingOptions analyze_opts;
  auto* analyze_cmd = app.add_subcommand("analyze", "Print distortion and rate figures as CSV");
  analyze_cmd->add_option("--host", analyze_opts.host, "Host file (.i32 or .txt)")->required();
  add_coding_options(analyze_cmd, analyze_opts);

  ExperimentConfig exp;
  std::string grid_text;
  std::string exp_out;
  auto* exp_cmd = app.add_subcommand("experiment", "Run a reproducible sweep and write CSV");
  exp_cmd->add_option("id", exp.id, "fig2, fig3 or lsb")
      ->required()
      ->check(CLI::IsMember({"fig2", "fig3", "lsb"}));
  exp_cmd->add_option("--n", exp.n, "Host length")->check(CLI::Range(std::uint64_t{2}, kMaxHostLength));
  exp_cmd->add_option("--seed", exp.seed, "Random seed");
  exp_cmd->add_option("--grid", grid_text, "start:stop:step or comma separated values");
  exp_cmd->add_option("--out", exp_out, "CSV output file (default stdout)");
  exp_cmd->add_option("--threads", exp.threads, "Worker threads (0: all cores)");

  CLI11_PARSE(app, argc, argv);

  try {
    if (*embed_cmd) return run_embed(embed_opts, msg_path);
    if (*extract_cmd) return run_extract(extract_opts);
    if (*analyze_cmd) return run_analyze(analyze_opts);
    exp.grid = parse_grid(grid_text);
    return run_experiment_cmd(exp, exp_out);
  } catch (const CapacityError& e) {
    std::cerr << "error: capacity exceeded: message has " << e.requested() << " bits, capacity is "
              << e.available() << " bits\n";
    return kCapacity;
  } catch (const InfeasibleError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kInfeasible;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kIo;
  }
}
