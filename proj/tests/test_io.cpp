#include <doctest.h>
#include <racert/io.hpp>

#include <filesystem>
#include <fstream>

using namespace racert;
namespace fs = std::filesystem;

namespace {
Vec v1(double a) {
  Vec v(1);
  v[0] = a;
  return v;
}

fs::path temp_dir() {
  static int counter = 0;
  fs::path p = fs::temp_directory_path() /
               ("racert_io_test_" + std::to_string(::getpid()) + "_" +
                std::to_string(counter++));
  fs::create_directories(p);
  return p;
}

ValueField small_field() {
  auto model = builtin_system("linear1d");
  auto lattice = ActionLattice::build(model, 7, 3);
  SolveOptions opts;
  opts.stable_window = 30;
  return value_iteration(model, Grid({{-4.0, 4.0, 41}}), 0.9, lattice, opts);
}
}  // namespace

TEST_CASE("field binary container round trip") {
  auto dir = temp_dir();
  ValueField f = small_field();
  save_field(f, dir / "f.rvf");
  ValueField g = load_field(dir / "f.rvf");
  CHECK(g.grid == f.grid);
  CHECK(g.gamma == f.gamma);
  CHECK(g.mode == f.mode);
  CHECK(g.bound == f.bound);
  CHECK(g.stats.iterations == f.stats.iterations);
  CHECK(g.stats.residual == f.stats.residual);
  CHECK(g.stats.converged == f.stats.converged);
  REQUIRE(g.values.size() == f.values.size());
  for (std::size_t i = 0; i < f.values.size(); ++i) CHECK(g.values[i] == f.values[i]);
}

TEST_CASE("field loader rejects malformed files") {
  auto dir = temp_dir();
  {
    std::ofstream os(dir / "bad.rvf", std::ios::binary);
    os << "not a field";
  }
  CHECK_THROWS_AS(load_field(dir / "bad.rvf"), std::runtime_error);
  CHECK_THROWS_AS(load_field(dir / "missing.rvf"), std::runtime_error);
}

TEST_CASE("field CSV export writes one row per node") {
  auto dir = temp_dir();
  ValueField f = small_field();
  export_field_csv(f, dir / "f.csv");
  std::ifstream is(dir / "f.csv");
  std::string header;
  std::getline(is, header);
  CHECK(header == "x0,value");
  int rows = 0;
  std::string line;
  while (std::getline(is, line))
    if (!line.empty()) ++rows;
  CHECK(rows == static_cast<int>(f.grid.size()));
}

TEST_CASE("certified set JSON round trip") {
  auto model = builtin_system("linear1d");
  CertifiedSet set =
      certify_offline(model, Policy::constant(v1(0)), v1(-1.7), v1(-1.3), 0.05,
                      8, 0.9, CertMethod::both);
  REQUIRE_FALSE(set.members.empty());
  Json j = certified_set_to_json(set);
  CertifiedSet back = certified_set_from_json(j);
  CHECK(back.eps_x == set.eps_x);
  CHECK(back.horizon == set.horizon);
  REQUIRE(back.members.size() == set.members.size());
  for (std::size_t i = 0; i < set.members.size(); ++i) {
    CHECK(back.members[i].center[0] == set.members[i].center[0]);
    CHECK(*back.members[i].lipschitz_value == *set.members[i].lipschitz_value);
    REQUIRE(back.members[i].certified_controls.size() ==
            set.members[i].certified_controls.size());
    for (std::size_t t = 0; t < set.members[i].certified_controls.size(); ++t)
      CHECK(back.members[i].certified_controls[t][0] ==
            set.members[i].certified_controls[t][0]);
  }
}

TEST_CASE("cert report JSON carries no timing field") {
  auto model = builtin_system("linear1d");
  CertReport rep = certify_online(model, Policy::constant(v1(0)), v1(-1.5), 0.05,
                                  5, 0.9, CertMethod::both);
  Json j = cert_report_to_json(rep);
  CHECK_FALSE(j.contains("wall_time_seconds"));
  CHECK(j["lipschitz"]["certified"].get<bool>());
}

TEST_CASE("manifest records command, config, seed and version") {
  auto dir = temp_dir();
  write_manifest(dir / "manifest.json", "solve", Json{{"gamma", 0.9}},
                 {"field.rvf"}, 7, 1.25);
  Json j = load_json_file(dir / "manifest.json");
  CHECK(j["command"] == "solve");
  CHECK(j["config"]["gamma"] == 0.9);
  CHECK(j["seed"] == 7);
  CHECK(j["version"] == toolkit_version());
  CHECK(j["artifacts"][0] == "field.rvf");
}

TEST_CASE("custom linear system from JSON matches the builtin benchmark") {
  Json j = Json::parse(R"({
    "custom_linear": {
      "A": [[1.01]], "B": [[0.01]], "D": [[0.01]],
      "control": {"box": {"lo": [-1.0], "hi": [1.0]}},
      "disturbance": {"box": {"lo": [-0.5], "hi": [0.5]}},
      "clamp": 10.0,
      "reward_affine": [{"p": [-1.0], "k": 1.0}],
      "constraint_affine": [{"p": [1.0], "k": -2.0}]
    }
  })");
  SystemModel custom = system_from_json(j);
  SystemModel builtin = builtin_system("linear1d");
  CHECK(custom.lip_fx == doctest::Approx(1.01));
  CHECK(custom.lip_fd == doctest::Approx(0.01));
  CHECK(custom.eps_d == doctest::Approx(0.5));
  for (double x : {-3.0, -1.5, 0.0, 2.0}) {
    CHECK(custom.reward(v1(x)) == doctest::Approx(builtin.reward(v1(x))));
    CHECK(custom.constraint(v1(x)) == doctest::Approx(builtin.constraint(v1(x))));
    CHECK(custom.step(v1(x), v1(0.5), v1(-0.25))[0] ==
          doctest::Approx(builtin.step(v1(x), v1(0.5), v1(-0.25))[0]));
  }

  j["mode"] = "viability";
  SystemModel viability = system_from_json(j);
  CHECK(viability.reward(v1(0.0)) == -1.0);
}

TEST_CASE("builtin system JSON with params and mode") {
  Json j = Json::parse(R"({"name": "di2", "params": {"dt": 0.2}, "mode": "reach"})");
  SystemModel m = system_from_json(j);
  CHECK(m.constraint(Vec::Zero(2)) == 1.0);
  Mat A(2, 2);
  A << 1.0, 0.2, 0.0, 1.0;
  CHECK(m.lip_fx == doctest::Approx(A.jacobiSvd().singularValues()(0)));
}

TEST_CASE("malformed system JSON is rejected") {
  CHECK_THROWS(system_from_json(Json::parse(R"({"title": "nope"})")));
  CHECK_THROWS(system_from_json(Json::parse(R"({"name": "warp_drive"})")));
}

TEST_CASE("atomic text write replaces the file completely") {
  auto dir = temp_dir();
  write_text_atomic(dir / "a.txt", "first");
  write_text_atomic(dir / "a.txt", "second");
  std::ifstream is(dir / "a.txt");
  std::string content((std::istreambuf_iterator<char>(is)),
                      std::istreambuf_iterator<char>());
  CHECK(content == "second");
  CHECK_FALSE(fs::exists(dir / "a.txt.tmp"));
}
