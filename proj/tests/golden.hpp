#pragma once

#include <fstream>
#include <string>
#include <vector>

#include "cfier/common.hpp"

namespace testing {

struct BesselRecord {
    int order;
    cfier::cplx z, f;
};

inline std::vector<BesselRecord> read_bessel(const std::string& name)
{
    std::ifstream in(std::string(CFIER_DATA_DIR) + "/golden/" + name);
    std::vector<BesselRecord> out;
    int order;
    double zr, zi, fr, fi;
    while (in >> order >> zr >> zi >> fr >> fi)
        out.push_back({order, {zr, zi}, {fr, fi}});
    return out;
}

struct CircleRecord {
    int m;
    cfier::cplx k, s, kd, n;
};

inline std::vector<CircleRecord> read_circle(cfier::cplx k)
{
    std::ifstream in(std::string(CFIER_DATA_DIR) + "/golden/circle_eigs.txt");
    std::vector<CircleRecord> out;
    int m;
    double v[8];
    while (in >> m >> v[0] >> v[1] >> v[2] >> v[3] >> v[4] >> v[5] >> v[6] >> v[7]) {
        CircleRecord r{m, {v[0], v[1]}, {v[2], v[3]}, {v[4], v[5]}, {v[6], v[7]}};
        if (r.k == k)
            out.push_back(r);
    }
    return out;
}

} // namespace testing
