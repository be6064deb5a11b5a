#include "doctest.h"

#include "qr/qr.h"

#include <json.hpp>

#include <cmath>
#include <string>
#include <vector>

using nlohmann::json;

namespace {

json take(char* s) {
  json j = json::parse(s);
  qr_string_free(s);
  return j;
}

}  // namespace

TEST_CASE("eval through the C API") {
  char* out = nullptr;
  REQUIRE(qr_eval_json("13", nullptr, "exists y. x=y*y & !(x=0)", nullptr, &out) == QR_OK);
  auto j = take(out);
  CHECK(j["schema"] == 1);
  CHECK(j["size"] == 6);
  CHECK(j["field"]["q"] == 13);
  CHECK(j["density"]["num"] == "6");
  CHECK(j["density"]["den"] == "13");
  CHECK(j["members"].size() == 6);

  CHECK(qr_eval_json("12", nullptr, "x = 0", nullptr, &out) == QR_NOT_PRIME);
  CHECK(std::string(qr_last_error()).find("12") != std::string::npos);
  CHECK(qr_eval_json("13", nullptr, "x = = 0", nullptr, &out) == QR_SYNTAX_ERROR);
  CHECK(qr_eval_json(nullptr, nullptr, "x = 0", nullptr, &out) == QR_INVALID_ARGUMENT);
  CHECK(std::string(qr_status_name(QR_ORDER_CAP)) == "OrderCap");
}

TEST_CASE("groups and subsets") {
  qr_group* g = nullptr;
  REQUIRE(qr_group_create("add:13", nullptr, &g) == QR_OK);
  CHECK(qr_group_order(g) == 13);
  CHECK(qr_group_is_abelian(g) == 1);
  qr_subset* s = nullptr;
  REQUIRE(qr_subset_from_formula(g, "exists y. (x = y * y & !(x = 0))", nullptr, &s) == QR_OK);
  CHECK(qr_subset_size(s) == 6);
  double eps = 0, err = 0, eps_chars = 0;
  REQUIRE(qr_subset_eps(g, s, 0, &eps, &err) == QR_OK);
  REQUIRE(qr_subset_eps(g, s, 1, &eps_chars, nullptr) == QR_OK);
  CHECK(std::abs(eps - (std::sqrt(13.0) + 1) / 26) < 1e-9);
  CHECK(std::abs(eps - eps_chars) < 1e-8);

  char* out = nullptr;
  int violation = -1;
  REQUIRE(qr_report_json(g, s, 3, 0, &out, &violation) == QR_OK);
  auto j = take(out);
  CHECK(violation == 0);
  CHECK(j["graph"]["eps1"]["num"] == "186");
  CHECK(j["graph"]["eps1"]["den"] == "28561");
  CHECK(j["subgroup"]["index"] == 1);
  CHECK(j["fourier_eps"]["method"] == "spectral");
  CHECK(j["subset"]["complexity"].get<int>() > 0);
  CHECK(j["group"]["mul_formula"] == "z = x + y");
  CHECK(j["group"]["mul_complexity"].get<int>() > 0);
  qr_subset_free(s);

  const std::vector<std::uint32_t> ids{0, 13};
  CHECK(qr_subset_from_ids(g, ids.data(), ids.size(), &s) == QR_INVALID_ARGUMENT);
  qr_group_free(g);

  REQUIRE(qr_group_create("sl2:3", nullptr, &g) == QR_OK);
  unsigned dims[16];
  std::size_t count = 0;
  REQUIRE(qr_irrep_dimensions(g, 0, dims, 16, &count) == QR_OK);
  CHECK(count == 7);
  CHECK(dims[6] == 3);
  CHECK(qr_irrep_dimensions(g, 0, dims, 2, &count) == QR_INVALID_ARGUMENT);
  CHECK(count == 7);
  CHECK(qr_subset_eps(g, nullptr, 0, nullptr, nullptr) == QR_INVALID_ARGUMENT);
  qr_subset* none = nullptr;
  REQUIRE(qr_subset_from_ids(g, nullptr, 0, &none) == QR_OK);
  CHECK(qr_subset_eps(g, none, 1, &eps, nullptr) == QR_NOT_ABELIAN);
  qr_subset_free(none);
  qr_group_free(g);

  CHECK(qr_group_create("bogus:3", nullptr, &g) == QR_INVALID_ARGUMENT);
}

TEST_CASE("sweep and suites through the C API") {
  const std::vector<std::uint64_t> qs{5, 13, 17, 29};
  char *js = nullptr, *csv = nullptr;
  REQUIRE(qr_sweep("paley", qs.data(), qs.size(), 1, 0, &js, &csv) == QR_OK);
  auto j = take(js);
  CHECK(j["rows"].size() == 4);
  CHECK(j["eps1_fit"]["slope"].get<double>() <= -0.8);
  std::string table = csv;
  qr_string_free(csv);
  CHECK(table.rfind("q,delta_num,delta_den,eps1_num,eps1_den,eps3,fourier_eps,h_index,max_coset_eps1_num,"
                    "max_coset_eps1_den\n",
                    0) == 0);
  CHECK(table.find("\n13,6,13,186,28561,") != std::string::npos);

  const std::vector<std::uint64_t> bad{5, 8};
  CHECK(qr_sweep("paley", bad.data(), bad.size(), 1, 0, &js, nullptr) == QR_INADMISSIBLE_Q);
  CHECK(qr_sweep("nope", qs.data(), qs.size(), 1, 0, &js, nullptr) == QR_INVALID_ARGUMENT);

  int passed = 0;
  REQUIRE(qr_verify_json("cor25", 0, &js, &passed) == QR_OK);
  CHECK(passed == 1);
  CHECK(take(js)["suite"] == "cor25");

  const std::vector<std::uint64_t> odd{5, 7, 9, 11, 13};
  REQUIRE(qr_dim_measure_json("exists y. (x = y * y & !(x = 0))", nullptr, odd.data(), odd.size(), &js) == QR_OK);
  auto dm = take(js);
  CHECK(dm["d"] == 1);
  CHECK(dm["r"]["num"] == "1");
  CHECK(dm["r"]["den"] == "2");
  CHECK(qr_dim_measure_json("x = x & !(x = x)", nullptr, odd.data(), odd.size(), &js) == QR_EMPTY_ACROSS_SWEEP);
  CHECK(qr_ratio_stability_json("x = x", "x = 0", nullptr, odd.data(), odd.size(), &js) == QR_NOT_SUBSET);
  REQUIRE(qr_weak_regularity_json("artin_schreier", 4, 2, &js) == QR_OK);
  CHECK(take(js)["max_defect"] == 0.0);
}
