// Python bindings. Amounts are integer satoshi, ratios integer ppm; contract
// sets travel as lists of (nu, lambda, rho) tuples.

#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "frsc/experiments.hpp"

namespace py = pybind11;
using namespace frsc;

namespace {

using ContractTuple = std::tuple<std::uint64_t, std::uint32_t, std::uint32_t>;
using SpecTuple = std::pair<std::uint32_t, std::uint32_t>;
using SegmentTuple = std::pair<std::uint64_t, std::uint64_t>;

FrscSet to_set(const std::vector<ContractTuple>& in) {
  std::vector<Frsc> out;
  for (const auto& [nu, lambda, rho] : in) out.push_back({Amount(nu), lambda, Ppm(rho)});
  return FrscSet(std::move(out));
}

std::vector<ContractTuple> from_set(const FrscSet& set) {
  std::vector<ContractTuple> out;
  for (const auto& c : set.contracts()) out.emplace_back(c.nu.sat(), c.lambda, c.rho.value());
  return out;
}

std::vector<ContractSpec> to_specs(const std::vector<SpecTuple>& in) {
  std::vector<ContractSpec> out;
  for (const auto& [lambda, rho] : in) out.push_back({lambda, Ppm(rho)});
  return out;
}

std::vector<std::uint64_t> sats(const std::vector<Amount>& v) {
  std::vector<std::uint64_t> out;
  for (Amount a : v) out.push_back(a.sat());
  return out;
}

std::vector<SegmentTuple> from_segments(const std::vector<InflowSegment>& segs) {
  std::vector<SegmentTuple> out;
  for (const auto& s : segs) {
    if (s.period != 1) throw std::invalid_argument("segment is not expressible in sat/s");
    out.emplace_back(s.start, s.amount);
  }
  return out;
}

std::vector<InflowSegment> to_segments(const std::vector<SegmentTuple>& in) {
  std::vector<InflowSegment> out;
  for (const auto& [start, rate] : in) out.push_back({start, rate, 1});
  return out;
}

py::dict settlement_dict(const BlockSettlement& s) {
  py::dict d;
  d["reward_total"] = s.reward_total.sat();
  d["next_claim"] = s.next_claim.sat();
  d["miner_direct"] = s.miner_direct.sat();
  d["deposit_total"] = s.deposit_total.sat();
  d["per_contract_claims"] = sats(s.per_contract_claims);
  d["per_contract_deposits"] = sats(s.per_contract_deposits);
  return d;
}

}  // namespace

PYBIND11_MODULE(_frsc, m) {
  m.doc() = "Fee-redistribution contract mining simulator";

  py::register_exception<ConfigError>(m, "ConfigError", PyExc_ValueError);

  m.def("partial_claim", [](std::uint64_t nu, std::uint32_t lambda) {
    return partial_claim({Amount(nu), lambda, Ppm::one()}).sat();
  }, py::arg("nu"), py::arg("lam"));

  m.def("next_claim", [](const std::vector<ContractTuple>& set) { return next_claim(to_set(set)).sat(); },
        py::arg("contracts"));

  m.def("apply_block", [](const std::vector<ContractTuple>& set, std::uint64_t fees, std::uint32_t c) {
    auto [s, next] = apply_block(to_set(set), Amount(fees), SplitParams::from_contract_share(Ppm(c)));
    return py::make_tuple(settlement_dict(s), from_set(next));
  }, py::arg("contracts"), py::arg("fees"), py::arg("c_ppm"),
        "Settle one block; returns (settlement dict, contracts after).");

  m.def("init_genesis", [](std::uint64_t mean_fees, std::uint32_t c, const std::vector<SpecTuple>& specs) {
    return from_set(init_genesis(Amount(mean_fees), SplitParams::from_contract_share(Ppm(c)), to_specs(specs)));
  }, py::arg("mean_fees"), py::arg("c_ppm"), py::arg("specs"));

  m.def("effective_lambda_ratio", [](const std::vector<SpecTuple>& specs) {
    const auto r = effective_lambda(to_specs(specs));
    return py::make_tuple(r.numerator(), r.denominator());
  }, py::arg("specs"));

  m.def("parity_fees", [](std::uint64_t claim, std::uint32_t c) {
    return parity_fees(Amount(claim), SplitParams::from_contract_share(Ppm(c))).sat();
  }, py::arg("next_claim"), py::arg("c_ppm"));

  m.def("arrived_fees", [](const std::vector<SegmentTuple>& segs, double t) {
    return arrived_fees(FeeScenario(to_segments(segs)), t).sat();
  }, py::arg("segments"), py::arg("t"));

  m.def("parse_scenario", [](const std::string& text) { return from_segments(parse_scenario(text)); });
  m.def("format_scenario", [](const std::vector<SegmentTuple>& segs) { return format_scenario(to_segments(segs)); });
  m.def("long_term_scenario", [](std::uint64_t step) { return from_segments(scenarios::long_term(step)); },
        py::arg("step_width") = 600);
  m.def("triangle_wave_scenario", [](std::uint64_t step) { return from_segments(scenarios::triangle_wave(step)); },
        py::arg("step_width") = 600);

  m.def("sample_intervals", [](std::uint64_t seed, double rate, std::size_t n) {
    Rng rng(seed);
    std::vector<double> out(n);
    for (auto& x : out) x = sample_interval(rng, rate);
    return out;
  }, py::arg("seed"), py::arg("rate"), py::arg("n"));

  m.def("run_series", [](const std::vector<SegmentTuple>& segs, std::uint32_t c, const std::vector<SpecTuple>& specs,
                         std::uint64_t genesis_fees, std::uint64_t blocks, std::uint64_t seed, bool full_mempool,
                         std::uint64_t block_cap) {
    SeriesConfig cfg{FeeScenario(to_segments(segs), full_mempool, Amount(block_cap)),
                     SplitParams::from_contract_share(Ppm(c)), to_specs(specs), Amount(genesis_fees), blocks, seed};
    std::vector<SeriesRecord> rs;
    {
      py::gil_scoped_release release;
      rs = run_series(cfg);
    }
    return series_csv(rs, cfg.contracts.size());
  }, py::arg("segments"), py::arg("c_ppm"), py::arg("specs"), py::arg("genesis_fees") = 5'000'000'000ull,
        py::arg("blocks") = 10'000, py::arg("seed") = 42, py::arg("full_mempool") = true,
        py::arg("block_cap") = 5'000'000'000ull, "Single honest miner run; returns the series CSV text.");

  m.def("run_exp4", [](std::vector<std::uint32_t> fractions, bool frsc_enabled, std::uint32_t miners,
                       std::uint64_t blocks, std::uint64_t games, std::uint32_t c, std::uint32_t kappa,
                       double gamma, std::uint64_t seed, unsigned threads) {
    Exp4Config cfg;
    for (auto f : fractions) cfg.fractions.emplace_back(f);
    cfg.frsc_enabled = frsc_enabled;
    cfg.miners = miners;
    cfg.blocks_per_game = blocks;
    cfg.games = games;
    cfg.c = Ppm(c);
    cfg.kappa = Ppm(kappa);
    cfg.gamma = gamma;
    cfg.seed = seed;
    cfg.threads = threads;
    Exp4Result r;
    {
      py::gil_scoped_release release;
      r = run_exp4(cfg);
    }
    py::dict out;
    out["crossing_ppm"] = r.crossing ? py::cast(r.crossing->value()) : py::none();
    out["summary_csv"] = exp4_summary_csv(std::span(&r, 1));
    return out;
  }, py::arg("fractions_ppm"), py::arg("frsc_enabled") = true, py::arg("miners") = 20, py::arg("blocks") = 1000,
        py::arg("games") = 2000, py::arg("c_ppm") = 700'000, py::arg("kappa_ppm") = 500'000, py::arg("gamma") = 0.1,
        py::arg("seed") = 42, py::arg("threads") = 0);
}
