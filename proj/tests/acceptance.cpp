// Acceptance gate: runs every registered check with the pinned settings and
// prints one line per criterion.

#include <cstdio>
#include <map>
#include <string>
#include <vector>

#include "monge/checks.hpp"

using namespace monge::checks;

namespace {

constexpr int kSamples = 32;
constexpr double kTol = 1e-9;  // maps.T.composition raises this to 1e-6 internally
constexpr std::uint64_t kSeed = 42;

const std::map<int, const char*> kTitles = {
    {1, "symmetry generators and rank-7 independence"},
    {2, "structure constants, grading and derived series"},
    {3, "Jordan blocks of the adjoint actions"},
    {4, "Ta and Tb equivalences"},
    {5, "dihedral identities and orbit of m = 2"},
    {6, "Psi, PsiBar, Phi, Upsilon and the composite T"},
    {7, "prolongation of base components"},
    {8, "invariants J and I^2"},
    {9, "growth vectors"},
    {10, "roots, Weyl orbits and the arithmetic stratum"},
};

}  // namespace

int main() {
  RunOptions opts;
  opts.samples = kSamples;
  opts.tol = kTol;
  opts.seed = kSeed;
  const auto reports = run(opts);

  bool all_ok = true;
  for (const auto& [criterion, title] : kTitles) {
    int total = 0, passed = 0;
    double worst = 0;
    std::vector<std::string> failed;
    for (const auto& r : reports) {
      if (r.criterion != criterion) continue;
      ++total;
      if (r.status == Status::Pass) {
        ++passed;
        worst = std::max(worst, r.residual);
      } else {
        failed.push_back(r.id + " (" + to_string(r.status) + ", residual " + std::to_string(r.residual) + ")");
      }
    }
    const bool ok = total > 0 && passed == total;
    all_ok = all_ok && ok;
    std::printf("AC%-2d %s  %s: %d/%d checks, max passing residual %.3g", criterion, ok ? "PASS" : "FAIL",
                title, passed, total, worst);
    for (const auto& f : failed) std::printf("; failed %s", f.c_str());
    std::printf("\n");
  }
  return all_ok ? 0 : 1;
}
