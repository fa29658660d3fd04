#pragma once

// Re-verification of the special functions against the committed golden
// tables (records `order re(z) im(z) re(f) im(f)`).

#include <filesystem>
#include <string>
#include <vector>

namespace cfier {

struct OracleResult {
    std::string file;
    int records = 0;
    double worst = 0.0; ///< error relative to max(|J0|, |J1|, |f|) at the argument
    double tolerance = 0.0;

    bool pass() const { return records > 0 && worst <= tolerance; }
};

/// Checks bessel_j.txt, bessel_y.txt and hankel_h1.txt under `dir`. A missing or
/// empty file gives records = 0.
std::vector<OracleResult> oracle_check(const std::filesystem::path& dir);

/// Directory of the golden tables shipped with the sources.
std::filesystem::path default_golden_dir();

} // namespace cfier
