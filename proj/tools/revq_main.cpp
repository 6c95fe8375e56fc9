#include <cstdio>
#include <fstream>
#include <iostream>
#include <sstream>

#include "CLI11.hpp"
#include "revq/acceptance.hpp"
#include "revq/ceval.hpp"
#include "revq/denote.hpp"
#include "revq/parser.hpp"
#include "revq/qeval.hpp"
#include "revq/stdlib.hpp"
#include "revq/typeck.hpp"

using namespace revq;

namespace {

Dialect dialect_of(const std::string& path) {
  if (path.size() >= 5 && path.substr(path.size() - 5) == ".qrev") return Dialect::Quantum;
  if (path.size() >= 4 && path.substr(path.size() - 4) == ".rev") return Dialect::Classical;
  throw Error(errc::malformed, "cannot tell the dialect of '" + path +
                                   "' (expected a .qrev or .rev extension)");
}

std::string slurp(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error(errc::malformed, "cannot open '" + path + "'");
  std::ostringstream os;
  os << in.rdbuf();
  return os.str();
}

struct Loaded {
  Dialect dialect;
  SourceProgram prog;
  FixTypes fix_types;
};

Loaded load(const std::string& path) {
  Loaded l;
  l.dialect = dialect_of(path);
  l.prog = parse(slurp(path), l.dialect);
  l.fix_types = check_program(l.prog);
  return l;
}

const Decl* pick_iso_or_die(const SourceProgram& prog, const std::string& name) {
  const Decl* d = prog.pick_iso(name);
  if (!d)
    throw Error(errc::malformed,
                name.empty() ? "no iso declaration in file" : "no iso named '" + name + "'");
  return d;
}

std::string show_value(const NormalValue& nv) { return pretty(nv.to_term(), 12); }

int guarded(const std::string& file, const std::function<int()>& body) {
  try {
    return body();
  } catch (const Error& e) {
    std::cerr << e.render(file) << "\n";
    return 1;
  } catch (const std::exception& e) {
    std::cerr << file << ": error: " << e.what() << "\n";
    return 1;
  }
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"workbench for the reversible quantum-control and classical pattern-matching "
               "languages"};
  app.require_subcommand(1);

  std::string file, iso_name, arg_text, value_text, json_path;
  long fuel = 10000;
  int cutoff = kDefaultCutoff;
  int bound = 7;
  std::vector<std::string> gen_args;
  std::string gen_id;

  auto* c_check = app.add_subcommand("check", "parse and typecheck a source file");
  c_check->add_option("file", file)->required();

  auto* c_run = app.add_subcommand("run", "evaluate main (or --iso applied to --arg)");
  c_run->add_option("file", file)->required();
  c_run->add_option("--fuel", fuel, "step limit for classical evaluation");
  c_run->add_option("--arg", arg_text, "argument term for the chosen iso");
  c_run->add_option("--iso", iso_name, "iso to run (default: last declared)");

  auto* c_inv = app.add_subcommand("invert", "apply the inverse of a quantum iso to a value");
  c_inv->add_option("file", file)->required();
  c_inv->add_option("--value", value_text)->required();
  c_inv->add_option("--iso", iso_name);

  auto* c_mat = app.add_subcommand("matrix", "matrix semantics and unitarity report");
  c_mat->add_option("file", file)->required();
  c_mat->add_option("--cutoff", cutoff, "Nat truncation (default 16)");
  c_mat->add_option("--json", json_path, "write the matrix as JSON to this path");
  c_mat->add_option("--iso", iso_name);

  auto* c_pinj = app.add_subcommand("pinj", "partial-injection table of a classical iso");
  c_pinj->add_option("file", file)->required();
  c_pinj->add_option("--bound", bound, "value size bound for the domain enumeration");
  c_pinj->add_option("--fuel", fuel);
  c_pinj->add_option("--iso", iso_name);

  auto* c_gen = app.add_subcommand("gen", "emit a library program");
  c_gen->add_option("id", gen_id, "program id")->required();
  c_gen->allow_extras();  // raw generator arguments (types, values, sizes)

  auto* c_self = app.add_subcommand("selftest", "run the acceptance suite");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int code = app.exit(e);
    return code == 0 ? 0 : 2;
  }

  if (c_check->parsed()) {
    return guarded(file, [&] {
      load(file);
      std::cout << "ok\n";
      return 0;
    });
  }

  if (c_run->parsed()) {
    return guarded(file, [&] {
      Loaded l = load(file);
      TermPtr entry;
      if (!arg_text.empty()) {
        const Decl* d = pick_iso_or_die(l.prog, iso_name);
        if (d->iso_type->tag != IsoType::Tag::Ground)
          throw Error(errc::arrow_applied, "cannot apply an arrow-typed iso to a value");
        TermPtr arg = parse_term(arg_text, l.dialect);
        typecheck_term_at(Context{}, arg, d->iso_type->src, l.dialect);
        entry = mk_app(d->iso, arg);
      } else if (auto m = l.prog.entry()) {
        entry = *m;
      } else {
        throw Error(errc::malformed, "nothing to run: no main and no --arg");
      }
      if (l.dialect == Dialect::Quantum) {
        std::cout << show_value(normalize(entry)) << "\n";
        return 0;
      }
      Outcome o = eval(entry, fuel, &l.fix_types);
      switch (o.tag) {
        case Outcome::Tag::Value:
          std::cout << pretty(o.value, 12) << "\n";
          break;
        case Outcome::Tag::Stuck:
          std::cout << "stuck: " << o.site << "\n";
          break;
        case Outcome::Tag::OutOfFuel:
          std::cout << "out-of-fuel after " << o.steps << " steps\n";
          break;
        case Outcome::Tag::Bottom:
          std::cout << "bottom\n";
          break;
      }
      return 0;
    });
  }

  if (c_inv->parsed()) {
    return guarded(file, [&] {
      Loaded l = load(file);
      if (l.dialect != Dialect::Quantum)
        throw Error(errc::dialect, "invert applies quantum isos; classical inversion is 'gen'-level");
      const Decl* d = pick_iso_or_die(l.prog, iso_name);
      TermPtr v = parse_term(value_text, l.dialect);
      typecheck_term_at(Context{}, v, d->iso_type->dst, l.dialect);
      std::cout << show_value(apply_inverse(d->iso, v)) << "\n";
      return 0;
    });
  }

  if (c_mat->parsed()) {
    return guarded(file, [&] {
      Loaded l = load(file);
      if (l.dialect != Dialect::Quantum)
        throw Error(errc::dialect, "matrix semantics is quantum-only; use pinj");
      const Decl* d = pick_iso_or_die(l.prog, iso_name);
      Matrix m = sem_iso(d->iso, cutoff);
      double res = unitarity_residual(m);
      char buf[32];
      std::snprintf(buf, sizeof(buf), "%.1e", res);
      std::cout << "dim: " << m.rows() << " x " << m.cols() << "\n";
      std::cout << "unitary: " << (res < eps() ? "yes" : "no") << " (residual " << buf << ")\n";
      if (!json_path.empty()) {
        std::ofstream out(json_path);
        out << m.to_json() << "\n";
        std::cout << "wrote " << json_path << "\n";
      }
      return 0;
    });
  }

  if (c_pinj->parsed()) {
    return guarded(file, [&] {
      Loaded l = load(file);
      if (l.dialect != Dialect::Classical)
        throw Error(errc::dialect, "pinj extracts classical isos; use matrix");
      const Decl* d = pick_iso_or_die(l.prog, iso_name);
      if (d->iso_type->tag != IsoType::Tag::Ground)
        throw Error(errc::arrow_applied, "pinj needs a ground iso");
      PartialInjection p = sem_pinj(d->iso, d->iso_type->src, bound, fuel, &l.fix_types);
      for (size_t i = 0; i < p.domain.values.size(); i++) {
        if (p.mapping[i] < 0) continue;
        std::cout << pretty(p.domain.values[i], 12) << " -> " << pretty(p.outputs[i], 12) << "\n";
      }
      std::cout << "defined: " << p.defined_count() << " of " << p.domain.values.size()
                << " enumerated inputs (injective)\n";
      return 0;
    });
  }

  if (c_gen->parsed()) {
    return guarded("gen", [&] {
      gen_args = c_gen->remaining();
      std::cout << lib::generate_source(gen_id, gen_args);
      return 0;
    });
  }

  if (c_self->parsed()) {
    return accept::run_and_print(std::cout);
  }

  return 2;
}
