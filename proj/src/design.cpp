#include "curtail/design.hpp"

#include <charconv>
#include <sstream>
#include <stdexcept>

namespace curtail {

namespace {

void require(bool ok, const char* what) {
  if (!ok) throw std::domain_error(what);
}

bool in_open_unit(double x) { return x > 0.0 && x < 1.0; }

}  // namespace

void DesignParams::validate() const {
  require(in_open_unit(alpha), "alpha must lie in (0, 1)");
  require(in_open_unit(beta), "beta must lie in (0, 1)");
  require(in_open_unit(p0) && in_open_unit(p1), "p0 and p1 must lie in (0, 1)");
  require(p0 < p1, "p0 must be smaller than p1");
}

DesignFamily DesignFamily::block(int size) {
  if (size < 1) throw std::domain_error("block size must be positive");
  return {FamilyKind::BlockSC, size};
}

bool DesignFamily::two_stage() const {
  switch (kind) {
    case FamilyKind::Simon:
    case FamilyKind::SimonGo:
    case FamilyKind::NSC:
    case FamilyKind::SC:
      return true;
    default:
      return false;
  }
}

bool DesignFamily::curtailed() const {
  switch (kind) {
    case FamilyKind::NSC:
    case FamilyKind::SC:
    case FamilyKind::MStage:
      return true;
    default:
      return false;
  }
}

bool DesignFamily::stochastic() const {
  return kind == FamilyKind::SC || kind == FamilyKind::MStage ||
         kind == FamilyKind::BlockSC;
}

bool DesignFamily::monitors(int m, int n) const {
  if (!stochastic()) return false;
  if (kind != FamilyKind::BlockSC) return true;
  return m == n || m % block_size == 0;
}

std::string DesignFamily::name() const {
  switch (kind) {
    case FamilyKind::SingleStage: return "single";
    case FamilyKind::Simon: return "simon";
    case FamilyKind::SimonGo: return "simongo";
    case FamilyKind::NSC: return "nsc";
    case FamilyKind::SC: return "sc";
    case FamilyKind::MStage: return "mstage";
    case FamilyKind::BlockSC: return "block" + std::to_string(block_size);
  }
  return "unknown";
}

DesignFamily DesignFamily::parse(std::string_view text) {
  if (text == "single" || text == "singlestage") return single_stage();
  if (text == "simon") return simon();
  if (text == "simongo" || text == "simon-go") return simon_go();
  if (text == "nsc") return nsc();
  if (text == "sc") return sc();
  if (text == "mstage" || text == "m-stage") return m_stage();
  std::string_view rest;
  if (text.starts_with("block:")) {
    rest = text.substr(6);
  } else if (text.starts_with("block")) {
    rest = text.substr(5);
  } else {
    throw std::invalid_argument("unknown design family '" + std::string(text) + "'");
  }
  int size = 0;
  auto [ptr, ec] = std::from_chars(rest.data(), rest.data() + rest.size(), size);
  if (ec != std::errc{} || ptr != rest.data() + rest.size() || size < 1) {
    throw std::invalid_argument("bad block size in '" + std::string(text) + "'");
  }
  return block(size);
}

void DesignRealisation::validate() const {
  require(n >= 1, "N must be positive");
  require(r >= 0 && r < n, "r must satisfy 0 <= r < N");
  if (family.kind == FamilyKind::BlockSC) require(family.block_size >= 1, "block size must be positive");
  if (family.two_stage()) {
    require(r1.has_value() && n1.has_value(), "two-stage designs need r1 and n1");
    require(*n1 >= 1 && *n1 < n, "n1 must satisfy 1 <= n1 < N");
    require(*r1 >= 0 && *r1 < *n1, "r1 must satisfy 0 <= r1 < n1");
    require(*r1 <= r, "r1 must not exceed r");
  } else {
    require(!r1 && !n1, "single-stage designs take no r1/n1");
  }
  if (family.kind == FamilyKind::SimonGo) {
    require(e1.has_value(), "Simon-with-go needs e1");
    require(*e1 > *r1 && *e1 <= *n1, "e1 must satisfy r1 < e1 <= n1");
  } else {
    require(!e1, "only Simon-with-go takes e1");
  }
  require(theta_f >= 0.0 && theta_e <= 1.0, "thresholds must lie in [0, 1]");
  require(theta_f < theta_e, "theta_F must be smaller than theta_E");
  if (!family.stochastic()) {
    require(theta_f == 0.0 && theta_e == 1.0, "non-stochastic designs use thresholds (0, 1)");
  }
}

DesignRealisation DesignRealisation::without_thresholds() const {
  DesignRealisation copy = *this;
  copy.theta_f = 0.0;
  copy.theta_e = 1.0;
  return copy;
}

std::string DesignRealisation::describe() const {
  std::ostringstream out;
  out << family.name() << "(";
  if (r1) out << "r1=" << *r1 << ",";
  if (e1) out << "e1=" << *e1 << ",";
  if (n1) out << "n1=" << *n1 << ",";
  out << "r=" << r << ",N=" << n;
  if (family.stochastic()) out << ",thetaF=" << theta_f << ",thetaE=" << theta_e;
  out << ")";
  return out.str();
}

DesignRealisation make_single_stage(int r, int n) {
  DesignRealisation d;
  d.family = DesignFamily::single_stage();
  d.r = r;
  d.n = n;
  d.validate();
  return d;
}

DesignRealisation make_simon(int r1, int n1, int r, int n) {
  DesignRealisation d{DesignFamily::simon(), r, n, r1, std::nullopt, n1};
  d.validate();
  return d;
}

DesignRealisation make_simon_go(int r1, int e1, int n1, int r, int n) {
  DesignRealisation d{DesignFamily::simon_go(), r, n, r1, e1, n1};
  d.validate();
  return d;
}

DesignRealisation make_nsc(int r1, int n1, int r, int n) {
  DesignRealisation d{DesignFamily::nsc(), r, n, r1, std::nullopt, n1};
  d.validate();
  return d;
}

DesignRealisation make_sc(int r1, int n1, int r, int n, double theta_f, double theta_e) {
  DesignRealisation d{DesignFamily::sc(), r, n, r1, std::nullopt, n1, theta_f, theta_e};
  d.validate();
  return d;
}

DesignRealisation make_m_stage(int r, int n, double theta_f, double theta_e) {
  DesignRealisation d{DesignFamily::m_stage(), r, n, {}, {}, {}, theta_f, theta_e};
  d.validate();
  return d;
}

DesignRealisation make_block(int block_size, int r, int n, double theta_f, double theta_e) {
  DesignRealisation d{DesignFamily::block(block_size), r, n, {}, {}, {}, theta_f, theta_e};
  d.validate();
  return d;
}

std::string_view to_string(PointStatus status) {
  switch (status) {
    case PointStatus::Continue: return "continue";
    case PointStatus::StopGo: return "go";
    case PointStatus::StopNoGo: return "nogo";
  }
  return "?";
}

PointStatus base_status(const DesignRealisation& d, LatticePoint pt) {
  const int s = pt.s;
  const int m = pt.m;
  if (s < 0 || m < 0 || s > m || m > d.n) {
    throw std::domain_error("lattice point outside 0 <= s <= m <= N");
  }
  if (m == d.n) return s > d.r ? PointStatus::StopGo : PointStatus::StopNoGo;

  switch (d.family.kind) {
    case FamilyKind::SingleStage:
      return PointStatus::Continue;
    case FamilyKind::Simon:
    case FamilyKind::SimonGo:
      if (m == *d.n1) {
        if (s <= *d.r1) return PointStatus::StopNoGo;
        if (d.e1 && s > *d.e1) return PointStatus::StopGo;
      }
      return PointStatus::Continue;
    case FamilyKind::NSC:
    case FamilyKind::SC:
    case FamilyKind::MStage:
    case FamilyKind::BlockSC: {
      if (d.family.kind == FamilyKind::BlockSC && m % d.family.block_size != 0) return PointStatus::Continue;
      if (s > d.r) return PointStatus::StopGo;
      const int failures = m - s;
      if (failures > d.n - d.r - 1) return PointStatus::StopNoGo;
      if (d.n1 && m <= *d.n1 && failures > *d.n1 - *d.r1 - 1) return PointStatus::StopNoGo;
      return PointStatus::Continue;
    }
  }
  return PointStatus::Continue;
}

}  // namespace curtail
