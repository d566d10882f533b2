#ifndef MINIMAX_IO_HPP_
#define MINIMAX_IO_HPP_

// Binary solution files and CSV exports.
//
// Solution file layout (all integers and doubles little-endian):
//   "MMXGAME" '\0', u32 version,
//   i32 n, f64 c, u8 zeta kind (0 power, 1 fixed), f64 zeta param,
//   u64 grid_size, u64 lp_grid_size, f64 zeta, f64 v, f64 value,
//   f64 log_step, u64 origin, u64 size, f64 prices[size],
//   f64 values[(n + 1) * size]              (stage-major),
//   laws[n * size]: u8 count, then count pairs (f64 t, f64 p).

#include <array>
#include <bit>
#include <cstdint>
#include <cstdio>
#include <cstring>
#include <fstream>
#include <istream>
#include <ostream>
#include <string>
#include <vector>

#include "minimax/errors.hpp"
#include "minimax/game_solver.hpp"
#include "minimax/stochastic.hpp"

namespace minimax {

inline constexpr std::uint32_t kSolutionFormatVersion = 1;

namespace detail {

inline constexpr std::array<char, 8> kSolutionMagic{'M', 'M', 'X', 'G', 'A', 'M', 'E', '\0'};

class BinaryWriter {
 public:
  explicit BinaryWriter(std::ostream& out) : out_(out) {}

  void u8(std::uint8_t x) { out_.put(static_cast<char>(x)); }
  void u32(std::uint32_t x) { le(x, 4); }
  void u64(std::uint64_t x) { le(x, 8); }
  void i32(std::int32_t x) { u32(static_cast<std::uint32_t>(x)); }
  void f64(double x) { u64(std::bit_cast<std::uint64_t>(x)); }
  void bytes(const char* p, std::size_t n) { out_.write(p, static_cast<std::streamsize>(n)); }

 private:
  void le(std::uint64_t x, int n) {
    for (int i = 0; i < n; ++i) out_.put(static_cast<char>((x >> (8 * i)) & 0xFF));
  }
  std::ostream& out_;
};

class BinaryReader {
 public:
  explicit BinaryReader(std::istream& in) : in_(in) {}

  std::uint8_t u8() { return static_cast<std::uint8_t>(le(1)); }
  std::uint32_t u32() { return static_cast<std::uint32_t>(le(4)); }
  std::uint64_t u64() { return le(8); }
  std::int32_t i32() { return static_cast<std::int32_t>(u32()); }
  double f64() { return std::bit_cast<double>(u64()); }
  void bytes(char* p, std::size_t n) {
    in_.read(p, static_cast<std::streamsize>(n));
    if (!in_) throw Error("solution file truncated");
  }

 private:
  std::uint64_t le(int n) {
    std::uint64_t x = 0;
    for (int i = 0; i < n; ++i) {
      const int ch = in_.get();
      if (ch == std::char_traits<char>::eof()) throw Error("solution file truncated");
      x |= static_cast<std::uint64_t>(static_cast<unsigned char>(ch)) << (8 * i);
    }
    return x;
  }
  std::istream& in_;
};

}  // namespace detail

inline void write_solution(std::ostream& out, const GameSolution& sol) {
  detail::BinaryWriter w(out);
  w.bytes(detail::kSolutionMagic.data(), detail::kSolutionMagic.size());
  w.u32(kSolutionFormatVersion);
  w.i32(sol.config.n);
  w.f64(sol.config.c);
  w.u8(sol.config.zeta_rule.kind == ZetaRule::Kind::power ? 0 : 1);
  w.f64(sol.config.zeta_rule.param);
  w.u64(sol.config.grid_size);
  w.u64(sol.config.lp_grid_size);
  w.f64(sol.zeta);
  w.f64(sol.v);
  w.f64(sol.value);
  w.f64(sol.grid.log_step());
  w.u64(sol.grid.origin());
  w.u64(sol.grid.size());
  for (double s : sol.grid.prices()) w.f64(s);
  for (const auto& stage : sol.values) {
    for (double x : stage) w.f64(x);
  }
  for (const auto& law : sol.policy.laws) {
    w.u8(law.count);
    for (std::uint8_t i = 0; i < law.count; ++i) {
      w.f64(law.atoms[i].t);
      w.f64(law.atoms[i].p);
    }
  }
  if (!out) throw Error("failed to write solution");
}

inline GameSolution read_solution(std::istream& in) {
  detail::BinaryReader r(in);
  std::array<char, 8> magic{};
  r.bytes(magic.data(), magic.size());
  if (magic != detail::kSolutionMagic) throw Error("not a solution file (bad magic)");
  const std::uint32_t version = r.u32();
  if (version != kSolutionFormatVersion) {
    throw Error("unsupported solution file version " + std::to_string(version));
  }
  GameSolution sol;
  sol.config.n = r.i32();
  sol.config.c = r.f64();
  const std::uint8_t kind = r.u8();
  const double param = r.f64();
  if (kind > 1) throw Error("bad zeta rule in solution file");
  sol.config.zeta_rule = kind == 0 ? ZetaRule::power(param) : ZetaRule::fixed(param);
  sol.config.grid_size = r.u64();
  sol.config.lp_grid_size = r.u64();
  sol.zeta = r.f64();
  sol.v = r.f64();
  sol.value = r.f64();
  const double h = r.f64();
  const std::uint64_t origin = r.u64();
  const std::uint64_t size = r.u64();
  if (sol.config.n < 1 || size < 3 || size > (1u << 26) || size != sol.config.grid_size) {
    throw Error("corrupt solution file header");
  }
  std::vector<double> prices(size);
  for (auto& s : prices) s = r.f64();
  sol.grid = PriceGrid::from_parts(h, origin, std::move(prices));
  sol.values.assign(static_cast<std::size_t>(sol.config.n) + 1, std::vector<double>(size));
  for (auto& stage : sol.values) {
    for (auto& x : stage) x = r.f64();
  }
  sol.policy.n = sol.config.n;
  sol.policy.c = sol.config.c;
  sol.policy.zeta = sol.zeta;
  sol.policy.v = sol.v;
  sol.policy.grid = sol.grid;
  sol.policy.laws.resize(static_cast<std::size_t>(sol.config.n) * size);
  for (auto& law : sol.policy.laws) {
    law.count = r.u8();
    if (law.count < 1 || law.count > 3) throw Error("corrupt law in solution file");
    for (std::uint8_t i = 0; i < law.count; ++i) {
      law.atoms[i].t = r.f64();
      law.atoms[i].p = r.f64();
    }
  }
  return sol;
}

inline void save_solution(const std::string& path, const GameSolution& sol) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error("cannot open '" + path + "' for writing");
  write_solution(out, sol);
}

inline GameSolution load_solution(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error("cannot open solution file '" + path + "'");
  return read_solution(in);
}

namespace detail {

inline std::string fmt17(double x) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  return buf;
}

}  // namespace detail

/// stage,price,value for every stage and grid node.
inline void write_values_csv(std::ostream& out, const GameSolution& sol) {
  out << "stage,price,value\n";
  for (std::size_t m = 0; m < sol.values.size(); ++m) {
    for (std::size_t k = 0; k < sol.grid.size(); ++k) {
      out << m << ',' << detail::fmt17(sol.grid.price(k)) << ',' << detail::fmt17(sol.values[m][k]) << '\n';
    }
  }
}

/// stage,node,price,t1,p1,t2,p2,t3,p3 (unused atoms left empty).
inline void write_policy_csv(std::ostream& out, const AdversaryPolicy& policy) {
  out << "stage,node,price,t1,p1,t2,p2,t3,p3\n";
  for (int m = 1; m <= policy.n; ++m) {
    for (std::size_t k = 0; k < policy.grid.size(); ++k) {
      const CompactLaw& law = policy.compact(m, k);
      out << m << ',' << k << ',' << detail::fmt17(policy.grid.price(k));
      for (std::uint8_t i = 0; i < 3; ++i) {
        if (i < law.count) {
          out << ',' << detail::fmt17(law.atoms[i].t) << ',' << detail::fmt17(law.atoms[i].p);
        } else {
          out << ",,";
        }
      }
      out << '\n';
    }
  }
}

/// One row per path: S_0, ..., S_n.
inline void write_path_row(std::ostream& out, const DiscretePath& path) {
  for (std::size_t m = 0; m < path.values.size(); ++m) {
    if (m) out << ',';
    out << detail::fmt17(path.values[m]);
  }
  out << '\n';
}

}  // namespace minimax

#endif  // MINIMAX_IO_HPP_
