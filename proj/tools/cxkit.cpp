#include <cstdlib>
#include <fstream>
#include <iostream>

#include "CLI11.hpp"

#include "cxkit/fixtures.hpp"

#ifndef CXKIT_FIXTURE_DIR
#define CXKIT_FIXTURE_DIR "fixtures"
#endif

namespace fs = std::filesystem;
using namespace cxkit;

namespace {

enum Exit { kPass = 0, kFail = 1, kUsage = 2, kRuntime = 3 };

struct Cli {
  std::string command;
  std::string spec;
  std::string json_out;
  std::string dir;
  std::uint64_t seed = RunOptions{}.seed;
  std::size_t budget = RunOptions{}.budget;
  double tol = RunOptions{}.tol;
  std::vector<std::string> suites;
  bool list = false;
  bool quiet = false;
  // synthesized task
  std::string complex_expr;
  std::string op;
  std::string name;
  std::string check;
  std::string side;
  std::string expect;
  int degree = -1;
  int variant = -1;
  int max_steps = -1;
  bool stokes = false;
  bool maxwell = false;
};

fs::path fixture_dir(const Cli& c) {
  if (!c.dir.empty()) return c.dir;
  if (const char* e = std::getenv("CXKIT_FIXTURES")) return e;
  return CXKIT_FIXTURE_DIR;
}

void emit_json(const Cli& c, const Json& j) {
  if (c.json_out.empty()) return;
  if (c.json_out == "-") {
    std::cout << dump(j);
    return;
  }
  std::ofstream out(c.json_out, std::ios::binary);
  if (!out) throw std::runtime_error("cannot write " + c.json_out);
  out << dump(j);
}

int fail_with(const Cli& c, int code, const std::string& kind, const std::string& msg, Json extra = Json::object()) {
  Json err = {{"kind", kind}, {"message", msg}};
  for (auto& [k, v] : extra.items()) err[k] = v;
  Json j = {{"schema", kReportSchema}, {"error", err}, {"pass", false}, {"exit_code", code}};
  std::cerr << "cxkit: " << msg << "\n";
  if (c.json_out.empty() || c.json_out == "-") std::cout << dump(j);
  else emit_json(c, j);
  return code;
}

fs::path find_spec_file(const Cli& c, const std::string& f) {
  if (fs::exists(f)) return f;
  fs::path in_dir = fixture_dir(c) / f;
  if (fs::exists(in_dir)) return in_dir;
  throw std::invalid_argument("cannot find spec file '" + f + "'");
}

std::string task_command(const Cli& c) {
  if (c.command != "ellipticity") return c.command;
  return "ellipticity-" + (c.check.empty() ? std::string("petrovskii") : c.check);
}

bool matches(const Cli& c, const Task& t) {
  if (c.command == "ellipticity") {
    if (t.command.rfind("ellipticity-", 0) != 0) return false;
    return c.check.empty() || t.command == "ellipticity-" + c.check;
  }
  return t.command == c.command;
}

TaskValue name_value(const std::string& s) {
  TaskValue v;
  v.kind = TaskValue::Kind::name;
  v.name = s;
  return v;
}

TaskValue int_value(const SpecDocument& d, long k) {
  TaskValue v;
  v.kind = TaskValue::Kind::poly;
  v.poly = Poly::constant(d.vars(), GaussianRational(k));
  return v;
}

// a task from the command-line flags
Task synthesize(const Cli& c, const SpecDocument& d, const std::string& target) {
  Task t;
  t.command = task_command(c);
  for (const auto& existing : d.tasks)
    if (existing.command == t.command && !existing.positional.empty() && existing.positional[0].kind == TaskValue::Kind::name &&
        existing.positional[0].name == target)
      t = existing;
  if (t.positional.empty()) t.positional.push_back(name_value(target));
  auto set = [&](const std::string& k, TaskValue v) {
    for (auto& [key, val] : t.named)
      if (key == k) {
        val = std::move(v);
        return;
      }
    t.named.emplace_back(k, std::move(v));
  };
  if (c.stokes && !t.flag("stokes")) t.positional.push_back(name_value("stokes"));
  if (c.maxwell && !t.flag("maxwell")) t.positional.push_back(name_value("maxwell"));
  if (c.degree >= 0) set("q", int_value(d, c.degree));
  if (c.variant >= 0) set("variant", int_value(d, c.variant));
  if (c.max_steps >= 0) set("max_steps", int_value(d, c.max_steps));
  if (!c.side.empty()) set("side", name_value(c.side));
  if (!c.expect.empty()) set("expect", name_value(c.expect));
  return t;
}

int run(const Cli& c) {
  RunOptions opt;
  opt.seed = c.seed;
  opt.budget = c.budget;
  opt.tol = c.tol;
  std::vector<RunBundle> bundles;

  if (c.command == "fixtures") {
    fs::path dir = fixture_dir(c);
    std::vector<std::string> all = list_suites(dir);
    if (all.empty()) throw std::invalid_argument("no fixture files in " + dir.string());
    if (c.list) {
      for (const auto& s : all) std::cout << s << "\n";
      return kPass;
    }
    std::vector<std::string> want = c.suites;
    if (want.empty() || (want.size() == 1 && want[0] == "all")) want = all;
    bundles = run_suites(dir, want, opt);
  } else {
    SpecDocument doc;
    std::string source = "<inline>";
    if (!c.spec.empty()) {
      fs::path p = find_spec_file(c, c.spec);
      doc = parse_spec(read_text(p));
      source = p.stem().string();
    }
    std::string target;
    if (!c.complex_expr.empty()) {
      if (!doc.find_complex(c.complex_expr)) {
        ComplexDef cd = parse_complex_expr(c.complex_expr);
        cd.name = c.name.empty() ? "C" : c.name;
        cd.value = cd.value.renamed(cd.name);
        if (doc.space == 0) doc.space = cd.value.spatial_dim();
        if (doc.space != cd.value.spatial_dim()) throw std::invalid_argument("complex dimension differs from the DSL file");
        cd.value = cd.value.with_vars(doc.vars());
        doc.complexes.push_back(cd);
        target = cd.name;
      } else {
        target = c.complex_expr;
      }
    } else if (!c.op.empty()) {
      if (doc.find_op(c.op)) {
        target = c.op;
      } else {
        fs::path p = find_spec_file(c, c.op);
        doc = parse_spec(read_text(p));
        source = p.stem().string();
        if (doc.ops.empty()) throw std::invalid_argument(p.string() + " defines no operator");
        target = c.name.empty() ? doc.ops.front().name : c.name;
      }
    }
    SpecDocument run_doc = doc;
    run_doc.tasks.clear();
    if (!target.empty()) {
      run_doc.tasks.push_back(synthesize(c, doc, target));
    } else if (c.command == "run") {
      run_doc.tasks = doc.tasks;
    } else {
      for (const auto& t : doc.tasks)
        if (matches(c, t)) run_doc.tasks.push_back(t);
    }
    if (run_doc.tasks.empty()) throw std::invalid_argument("nothing to run for '" + c.command + "'");
    bundles.push_back(run_document(run_doc, source, opt));
  }

  emit_json(c, bundle_json(bundles, opt));
  if (!c.quiet) (c.json_out == "-" ? std::cerr : std::cout) << bundle_text(bundles);
  bool any_error = false, all_pass = true;
  for (const auto& b : bundles) {
    all_pass = all_pass && b.pass();
    for (const auto& t : b.tasks) any_error = any_error || t.detail["data"].contains("error");
  }
  if (any_error) return kRuntime;
  return all_pass ? kPass : kFail;
}

}  // namespace

int main(int argc, char** argv) {
  Cli c;
  CLI::App app{"cxkit: differential complexes, Maxwell and Stokes operators"};
  app.require_subcommand(1);
  app.fallthrough();
  app.add_option("--spec", c.spec, "DSL file");
  app.add_option("--json", c.json_out, "JSON report path, - for stdout");
  app.add_option("--seed", c.seed, "seed of the numeric search");
  app.add_option("--budget", c.budget, "samples of the numeric search");
  app.add_option("--tol", c.tol, "tolerance for numeric expectations");
  app.add_option("--dir", c.dir, "fixture directory");
  app.add_flag("--quiet", c.quiet, "no text report");

  struct Sub {
    const char* name;
    const char* help;
  };
  const Sub subs[] = {
      {"verify", "complex property and the weighted composition condition"},
      {"laplacian", "generalized Laplacians"},
      {"maxwell", "Maxwell type block operators"},
      {"stokes", "Stokes type block operators"},
      {"ellipticity", "petrovskii, strong, injective, exactness or dn check"},
      {"dn-weights", "Douglis-Nirenberg weight plans"},
      {"parametrix", "symbol level parametrices and fundamental solutions"},
      {"evolution", "evolution identity for the fundamental symbol"},
      {"syzygy", "compatibility operator"},
      {"extend", "compatibility complex"},
      {"fixtures", "run the bundled fixture suites"},
      {"run", "every task of --spec"},
  };
  for (const auto& s : subs) {
    CLI::App* sc = app.add_subcommand(s.name, s.help);
    sc->callback([&c, name = std::string(s.name)] { c.command = name; });
    if (std::string(s.name) == "fixtures") {
      sc->add_option("--suite", c.suites, "suite name (file stem), or all");
      sc->add_flag("--list", c.list, "list suites");
      continue;
    }
    sc->add_option("--complex", c.complex_expr, "complex name or builder text, e.g. de_rham(3)");
    sc->add_option("--operator", c.op, "operator name or spec file");
    sc->add_option("--name", c.name, "name of the synthesized complex or chosen operator");
    sc->add_option("--degree,-q", c.degree, "degree q");
    sc->add_flag("--stokes", c.stokes, "Stokes variant");
    sc->add_flag("--maxwell", c.maxwell, "Maxwell variant");
    sc->add_option("--check", c.check, "ellipticity check")
        ->check(CLI::IsMember({"petrovskii", "strong", "injective", "exactness", "dn"}));
    sc->add_option("--side", c.side, "left or right")->check(CLI::IsMember({"left", "right"}));
    sc->add_option("--variant", c.variant, "Maxwell variant 0 or 1");
    sc->add_option("--max-steps", c.max_steps, "step budget of extend");
    sc->add_option("--expect", c.expect, "expected operator name");
  }

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    return fail_with(c, kUsage, "usage", e.what());
  }
  try {
    return run(c);
  } catch (const ParseError& e) {
    return fail_with(c, kUsage, "parse", e.what(),
                     {{"type", error_kind_name(e.kind())}, {"line", e.pos().line}, {"col", e.pos().col}});
  } catch (const std::invalid_argument& e) {
    return fail_with(c, kUsage, "usage", e.what());
  } catch (const std::exception& e) {
    return fail_with(c, kRuntime, "runtime", e.what());
  }
}
