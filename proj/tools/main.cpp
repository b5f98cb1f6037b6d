#include <iostream>

#include "CLI11.hpp"
#include "commands.hpp"

int main(int argc, char** argv) {
  using namespace fmosim::cli;
  CLI::App app{"FMO excitation-transfer simulator and NMR pulse compiler"};
  app.require_subcommand(1);

  CompileOptions compile;
  auto* c = app.add_subcommand("compile", "compile a target evolution into a pulse schedule");
  c->add_option("target", compile.target, "z:<l>, zz:<l>,<l+1> or xy:<l>,<l+1>")->required();
  c->add_option("--tau", compile.tau, "evolution time")->capture_default_str();
  c->add_option("--config", compile.config, "run configuration supplying NMR parameters");
  c->add_option("--out", compile.out, "schedule JSON path (default stdout)");
  c->add_option("--circuit", compile.circuit, "write the lowered circuit text here");
  c->add_option("--lowering", compile.lowering, "gates or blocks")->capture_default_str();

  VerifyOptions verify;
  auto* v = app.add_subcommand("verify", "check a schedule against its target unitary");
  v->add_option("schedule", verify.schedule, "schedule JSON")->required();
  v->add_option("--config", verify.config, "run configuration supplying NMR parameters");

  EvolveOptions evolve;
  auto* e = app.add_subcommand("evolve", "open-system evolution to a population CSV");
  e->add_option("config", evolve.config, "run configuration")->required();
  e->add_option("--method", evolve.method, "exact, trotter or both");
  e->add_option("--dt", evolve.dt, "step size");
  e->add_option("--t-max", evolve.t_max, "final time");
  e->add_option("--out", evolve.out, "CSV path (default from config, else stdout)");
  e->add_option("--states", evolve.states, "full density-matrix JSON dump");

  ChannelOptions channel;
  auto* ch = app.add_subcommand("channel", "Kraus operators, CPTP audit and circuit of a noise channel");
  ch->add_option("--kind", channel.kind, "dissipation, dephasing-paper or dephasing-corrected")->required();
  ch->add_option("--rate", channel.rate, "Gamma or gamma")->required();
  ch->add_option("--time", channel.time, "duration")->required();
  ch->add_option("--out", channel.out, "report path (default stdout)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& err) {
    return app.exit(err);
  } catch (const CLI::CallForAllHelp& err) {
    return app.exit(err);
  } catch (const CLI::ParseError& err) {
    app.exit(err);
    return kExitUsage;
  }

  if (c->parsed()) return cmd_compile(compile, std::cout, std::cerr);
  if (v->parsed()) return cmd_verify(verify, std::cout, std::cerr);
  if (e->parsed()) return cmd_evolve(evolve, std::cout, std::cerr);
  return cmd_channel(channel, std::cout, std::cerr);
}
