#pragma once

#include "kras/kr/family.hpp"

#include <fstream>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

namespace kras::testdata {

/// One frozen verdict of tests/oracles/iso_bruteforce.py.
struct IsoInstance {
    kr::KRDatum a, b;
    bool isomorphic = false;
    std::string line;
};

inline std::vector<IsoInstance> load_iso_instances(const std::string& path)
{
    std::ifstream in(path);
    if (!in)
        throw std::runtime_error("cannot read " + path);
    std::vector<IsoInstance> out;
    for (std::string line; std::getline(in, line);) {
        if (line.empty() || line[0] == '#')
            continue;
        std::vector<std::string> fields;
        std::istringstream ls(line);
        for (std::string f; std::getline(ls, f, '|');)
            fields.push_back(f);
        if (fields.size() != 4)
            throw std::runtime_error("bad oracle line: " + line);
        auto coeffs = [](const std::string& f) {
            std::istringstream cs(f);
            std::vector<Rational> c;
            for (std::string tok; cs >> tok;) {
                Rational q(tok);
                q.canonicalize();
                c.push_back(q);
            }
            return DensePoly(c);
        };
        std::istringstream head(fields[0]);
        int m = 0, r = 0, s = 0;
        head >> m >> r >> s;
        std::istringstream verdict(fields[3]);
        std::string v;
        verdict >> v;
        out.push_back({kr::KRDatum{m, r, s, coeffs(fields[1])}, kr::KRDatum{m, r, s, coeffs(fields[2])}, v == "iso",
                       line});
    }
    return out;
}

}  // namespace kras::testdata
