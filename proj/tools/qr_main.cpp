#include "qr/qr.h"

#include <CLI11.hpp>

#include <cstdint>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <memory>
#include <sstream>
#include <string>
#include <vector>

namespace {

constexpr int kPass = 0;
constexpr int kUsage = 1;
constexpr int kViolation = 2;

struct Failure {
  qr_status status;
};

void check(qr_status s) {
  if (s != QR_OK) throw Failure{s};
}

struct OwnedString {
  char* p = nullptr;
  ~OwnedString() { qr_string_free(p); }
  std::string str() const { return p ? p : ""; }
};

struct GroupDeleter {
  void operator()(qr_group* g) const { qr_group_free(g); }
};
struct SubsetDeleter {
  void operator()(qr_subset* s) const { qr_subset_free(s); }
};

void write_file(const std::string& path, const std::string& content) {
  std::ofstream f(path);
  if (!f) throw std::runtime_error("cannot write " + path);
  f << content;
}

void emit(const std::string& content, const std::string& path) {
  if (path.empty())
    std::cout << content << '\n';
  else
    write_file(path, content + "\n");
}

std::vector<std::uint32_t> parse_ids(const std::string& csv) {
  std::vector<std::uint32_t> out;
  std::stringstream ss(csv);
  std::string item;
  while (std::getline(ss, item, ','))
    if (!item.empty()) out.push_back(static_cast<std::uint32_t>(std::stoul(item)));
  return out;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Quasirandomness of definable sets and Cayley graphs over finite fields"};
  app.require_subcommand(1);
  app.set_version_flag("--version", qr_version());

  std::string out_path, json_path, params, modulus;
  std::uint64_t seed = 0;

  auto* eval = app.add_subcommand("eval", "Evaluate a formula over a finite field");
  std::string field, formula;
  eval->add_option("--field", field, "Field literal, e.g. 13 or 3^2")->required();
  eval->add_option("--formula", formula, "First-order formula in the language of rings")->required();
  eval->add_option("--modulus", modulus, "Modulus coefficients c0,...,cn");
  eval->add_option("--params", params, "Parameter values, e.g. a=5,b=2");
  eval->add_option("--out", out_path, "Write the JSON here instead of stdout");

  auto* report = app.add_subcommand("report", "Analyze D inside a group");
  std::string group, set_formula, set_ids;
  std::size_t max_index = 1;
  report->add_option("--group", group, "add:q, mul:q, sl2:q, cyclic:n or sym:n")->required();
  report->add_option("--modulus", modulus, "Modulus coefficients c0,...,cn");
  auto* sf = report->add_option("--set-formula", set_formula, "Formula over the carrier coordinates");
  auto* si = report->add_option("--set", set_ids, "Element ids of D, comma separated");
  sf->excludes(si);
  report->add_option("--params", params, "Parameter values, e.g. a=5");
  report->add_option("--subgroup-max-index", max_index, "Largest subgroup index searched")->check(CLI::PositiveNumber);
  report->add_option("--seed", seed, "Random seed");
  report->add_option("--out", out_path, "Write the JSON here instead of stdout");

  auto* sweep = app.add_subcommand("sweep", "Sweep a builtin family over field sizes");
  std::string family;
  std::vector<std::uint64_t> qs;
  sweep->add_option("--family", family, "paley, artin_schreier, sl2_trace_square, mult_cubes, complete")->required();
  sweep->add_option("--qs", qs, "Field sizes, comma separated")->required()->delimiter(',');
  sweep->add_option("--max-index", max_index, "Largest subgroup index searched")->check(CLI::PositiveNumber);
  sweep->add_option("--seed", seed, "Random seed");
  sweep->add_option("--out", out_path, "Write the CSV table here");
  sweep->add_option("--json", json_path, "Write the JSON report here");

  auto* verify = app.add_subcommand("verify", "Run a verification suite");
  std::string suite;
  verify->add_option("--suite", suite, "Suite name")
      ->required()
      ->check(CLI::IsMember({"gowers", "cor25", "lemma24", "sl2"}));
  verify->add_option("--seed", seed, "Random seed");
  verify->add_option("--out", out_path, "Write the JSON here instead of stdout");

  auto* dim = app.add_subcommand("dim", "Estimate dimension and measure of a definable set");
  dim->add_option("--formula", formula, "Formula")->required();
  dim->add_option("--qs", qs, "Field sizes, comma separated")->required()->delimiter(',');
  dim->add_option("--params", params, "Parameter values");
  dim->add_option("--out", out_path, "Write the JSON here instead of stdout");

  auto* ratio = app.add_subcommand("ratio", "Check stability of |A|/|B| for A inside B");
  std::string fa, fb;
  ratio->add_option("--a", fa, "Formula for A")->required();
  ratio->add_option("--b", fb, "Formula for B")->required();
  ratio->add_option("--qs", qs, "Field sizes, comma separated")->required()->delimiter(',');
  ratio->add_option("--params", params, "Parameter values");
  ratio->add_option("--out", out_path, "Write the JSON here instead of stdout");

  auto* audit = app.add_subcommand("audit", "Weak-regularity defect per coset pair");
  std::uint64_t q = 0;
  audit->add_option("--family", family, "Builtin family")->required();
  audit->add_option("--q", q, "Field size")->required();
  audit->add_option("--max-index", max_index, "Largest subgroup index searched")->check(CLI::PositiveNumber);
  audit->add_option("--out", out_path, "Write the JSON here instead of stdout");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kPass : kUsage;
  }

  const char* params_c = params.empty() ? nullptr : params.c_str();
  const char* modulus_c = modulus.empty() ? nullptr : modulus.c_str();
  try {
    if (*eval) {
      OwnedString js;
      check(qr_eval_json(field.c_str(), modulus_c, formula.c_str(), params_c, &js.p));
      emit(js.str(), out_path);
      return kPass;
    }
    if (*report) {
      if (set_formula.empty() && !*si) {
        std::cerr << "report: one of --set-formula or --set is required\n";
        return kUsage;
      }
      qr_group* gp = nullptr;
      check(qr_group_create(group.c_str(), modulus_c, &gp));
      std::unique_ptr<qr_group, GroupDeleter> g(gp);
      qr_subset* sp = nullptr;
      if (!set_formula.empty()) {
        check(qr_subset_from_formula(g.get(), set_formula.c_str(), params_c, &sp));
      } else {
        const auto ids = parse_ids(set_ids);
        check(qr_subset_from_ids(g.get(), ids.data(), ids.size(), &sp));
      }
      std::unique_ptr<qr_subset, SubsetDeleter> s(sp);
      OwnedString js;
      int violation = 0;
      check(qr_report_json(g.get(), s.get(), max_index, seed, &js.p, &violation));
      emit(js.str(), out_path);
      return violation ? kViolation : kPass;
    }
    if (*sweep) {
      OwnedString js, csv;
      check(qr_sweep(family.c_str(), qs.data(), qs.size(), max_index, seed, &js.p, &csv.p));
      if (!out_path.empty()) write_file(out_path, csv.str());
      if (!json_path.empty())
        write_file(json_path, js.str() + "\n");
      else if (out_path.empty())
        std::cout << js.str() << '\n';
      return kPass;
    }
    if (*verify) {
      OwnedString js;
      int passed = 0;
      check(qr_verify_json(suite.c_str(), seed, &js.p, &passed));
      emit(js.str(), out_path);
      return passed ? kPass : kViolation;
    }
    if (*dim) {
      OwnedString js;
      check(qr_dim_measure_json(formula.c_str(), params_c, qs.data(), qs.size(), &js.p));
      emit(js.str(), out_path);
      return kPass;
    }
    if (*ratio) {
      OwnedString js;
      check(qr_ratio_stability_json(fa.c_str(), fb.c_str(), params_c, qs.data(), qs.size(), &js.p));
      emit(js.str(), out_path);
      return kPass;
    }
    if (*audit) {
      OwnedString js;
      check(qr_weak_regularity_json(family.c_str(), q, max_index, &js.p));
      emit(js.str(), out_path);
      return kPass;
    }
  } catch (const Failure&) {
    std::cerr << "error: " << qr_last_error() << '\n';
    return kUsage;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kUsage;
  }
  return kUsage;
}
