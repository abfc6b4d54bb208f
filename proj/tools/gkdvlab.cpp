// command-line front end; subcommands land here as the modules they drive do
#include <CLI11.hpp>

#include "gkdvlab/ground.hpp"
#include "gkdvlab/io.hpp"

int main(int argc, char** argv) {
  CLI::App app{"gkdv two-bubble laboratory"};
  app.require_subcommand(1);

  auto* cst = app.add_subcommand("constants", "print ground-state constants as JSON");
  std::string out;
  cst->add_option("--out", out, "also write the JSON next to a run manifest");

  CLI11_PARSE(app, argc, argv);

  if (cst->parsed()) {
    const auto& c = gkdv::constants();
    gkdv::json j{{"c_q", c.c_Q}, {"m0", c.m0}, {"alpha", c.alpha},
                 {"mass_q", c.mass_Q}, {"grad_q", c.grad_Q}};
    printf("%s\n", j.dump(2).c_str());
    if (!out.empty()) gkdv::write_json(out, j);
  }
  return 0;
}
