#include "cfier/oracle.hpp"

#include <algorithm>
#include <fstream>

#include "cfier/specfun.hpp"

namespace cfier {

std::vector<OracleResult> oracle_check(const std::filesystem::path& dir)
{
    struct Table {
        const char* file;
        cplx (*fn)(int, cplx);
        double tol;
    };
    std::vector<OracleResult> out;
    for (const Table& t : {Table{"bessel_j.txt", bessel_j, 1e-12},
                           Table{"bessel_y.txt", bessel_y, 1e-12},
                           Table{"hankel_h1.txt", hankel_h1, 1e-11}}) {
        OracleResult r{t.file, 0, 0.0, t.tol};
        std::ifstream in(dir / t.file);
        int order;
        double zr, zi, fr, fi;
        while (in >> order >> zr >> zi >> fr >> fi) {
            const cplx z{zr, zi}, want{fr, fi};
            // relative to max(|J|,|Y|): plain relative error is meaningless at zeros
            const double scale = std::max({std::abs(bessel_j(0, z)), std::abs(bessel_j(1, z)),
                                           std::abs(want), 1e-300});
            r.worst = std::max(r.worst, std::abs(t.fn(order, z) - want) / scale);
            ++r.records;
        }
        out.push_back(r);
    }
    return out;
}

std::filesystem::path default_golden_dir()
{
    return std::filesystem::path(CFIER_DATA_DIR) / "golden";
}

} // namespace cfier
