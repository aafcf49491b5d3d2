// padt: encode strings and dendrograms as p-adic numbers, classify p-adic
// data, compute tree invariants and time-series geometry.

#include <fstream>
#include <iostream>
#include <string>

#include "CLI11.hpp"
#include "padt/cli.hpp"

namespace {

void add_common(CLI::App* sub, padt::RunConfig& cfg, std::string& input, std::string& output) {
  sub->add_option("--prime", cfg.prime, "prime p");
  sub->add_option("--degree", cfg.degree, "unramified degree f");
  sub->add_option("--reps", cfg.reps, "representative system")->check(CLI::IsMember({"poly", "teich"}));
  sub->add_option("--preset", cfg.preset, "letter code: dna5, dna2-teich, dna2-kk, dna2-blank");
  sub->add_option("--alphabet", cfg.alphabet, "comma separated alphabet, blank first");
  sub->add_option("--convention", cfg.convention, "dendrogram encoding")
      ->check(CLI::IsMember({"canonical", "paper-binary"}));
  sub->add_option("--precision", cfg.precision, "coefficients kept when parsing numbers");
  sub->add_flag("--normalize", cfg.normalize, "shift data so the first datum is 0");
  sub->add_option("--format", cfg.format, "output format")->check(CLI::IsMember({"json", "dot", "newick"}));
  sub->add_option("--cutoff-k", cfg.cutoff_k, "truncated Baire distance d_k");
  sub->add_option("--u", cfg.u, "translation length along the second axis (rational)");
  sub->add_option("--input", input, "input file (default stdin)");
  sub->add_option("--output", output, "output file (default stdout)");
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"p-adic dendrogram toolkit"};
  app.set_config("--config", "", "TOML or INI file with option defaults");
  app.require_subcommand(1);

  padt::RunConfig cfg;
  std::string input;
  std::string output;
  for (const auto& [name, help] : std::initializer_list<std::pair<const char*, const char*>>{
           {"encode", "encode strings or a dendrogram as p-adic numbers"},
           {"classify", "build the *-tree of p-adic data"},
           {"invariants", "volume, branch weights and balance"},
           {"timeseries", "velocity, flow and curve data of a dendrogram series"},
           {"export", "convert a dendrogram to json, dot or newick"}}) {
    add_common(app.add_subcommand(name, help), cfg, input, output);
  }
  CLI11_PARSE(app, argc, argv);
  cfg.command = app.get_subcommands().front()->get_name();

  std::ifstream in_file;
  if (!input.empty()) {
    in_file.open(input);
    if (!in_file) {
      std::cerr << "error: cannot open input '" << input << "'\n";
      return 2;
    }
  }
  std::ofstream out_file;
  if (!output.empty()) {
    out_file.open(output);
    if (!out_file) {
      std::cerr << "error: cannot open output '" << output << "'\n";
      return 2;
    }
  }
  std::istream& in = input.empty() ? std::cin : in_file;
  std::ostream& out = output.empty() ? std::cout : out_file;
  return padt::run(cfg, in, out, std::cerr);
}
