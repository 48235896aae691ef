#pragma once

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <stdexcept>
#include <string>

#include "smf2/vvforms.hpp"

namespace smf2 {

// On-disk expansion cache.  Plain text with exact rational tokens; the body
// is sorted by canonical index order and guarded by a checksum, and files
// are replaced atomically (write to a temporary, then rename).

constexpr int kCacheVersion = 1;

struct CacheHeader {
    int version = kCacheVersion;
    std::string name;
    int j = 0;
    int k = 0;
    Coset coset = Coset::even;
    int tmax = 0;
    int min_doubled_trace = 0;
};

namespace detail {

inline std::string cache_body(const VectorExpansion& f) {
    std::vector<std::pair<Index, HomogPoly>> rows(f.a.begin(), f.a.end());
    std::sort(rows.begin(), rows.end(),
              [](auto& a, auto& b) { return a.first < b.first; });
    std::ostringstream os;
    for (auto& [n, p] : rows) {
        os << n.nu1 << ' ' << n.nu2 << ' ' << n.rho;
        for (int i = 0; i <= f.j; ++i) os << ' ' << p.c[i].get_str();
        os << '\n';
    }
    return os.str();
}

inline void write_atomic(const std::string& path, const std::string& content) {
    std::string tmp = path + ".tmp";
    {
        std::ofstream out(tmp, std::ios::trunc | std::ios::binary);
        if (!out) throw std::runtime_error("cache: cannot write " + tmp);
        out << content;
        if (!out) throw std::runtime_error("cache: short write to " + tmp);
    }
    if (std::rename(tmp.c_str(), path.c_str()) != 0)
        throw std::runtime_error("cache: cannot rename into " + path);
}

}  // namespace detail

inline void store_cache(const std::string& path, const std::string& name,
                        const VectorExpansion& f) {
    std::string body = detail::cache_body(f);
    std::ostringstream os;
    os << "smf2-cache " << kCacheVersion << '\n'
       << "name " << name << '\n'
       << "weight " << f.j << ' ' << f.k << '\n'
       << "coset " << (f.coset == Coset::odd ? "odd" : "even") << '\n'
       << "tmax " << f.tmax << '\n'
       << "min_doubled_trace " << f.min_doubled_trace << '\n'
       << "checksum " << fnv1a(body) << '\n'
       << "---\n"
       << body;
    detail::write_atomic(path, os.str());
}

inline void store_cache(const std::string& path, const std::string& name,
                        const ScalarExpansion& f) {
    VectorExpansion v;
    v.j = 0;
    v.k = f.k;
    v.coset = f.coset;
    v.tmax = f.tmax;
    v.min_doubled_trace = f.min_doubled_trace;
    for (auto& [n, c] : f.a)
        if (c != 0) v.a[n] = HomogPoly::monomial(0, 0, c);
    store_cache(path, name, v);
}

// Load a cache file; returns false when the file is absent.  Malformed
// content, a version mismatch or a failed checksum throw.
inline bool load_cache(const std::string& path, CacheHeader& h, VectorExpansion& f) {
    std::ifstream in(path, std::ios::binary);
    if (!in) return false;
    auto fail = [&](const std::string& why) -> bool {
        throw std::runtime_error("cache: " + path + ": " + why);
    };
    std::string tag, cs;
    std::uint64_t sum = 0;
    if (!(in >> tag >> h.version) || tag != "smf2-cache") return fail("bad magic");
    if (h.version != kCacheVersion) return fail("unsupported version");
    if (!(in >> tag >> h.name) || tag != "name") return fail("missing name");
    if (!(in >> tag >> h.j >> h.k) || tag != "weight") return fail("missing weight");
    if (!(in >> tag >> cs) || tag != "coset" || (cs != "even" && cs != "odd"))
        return fail("missing coset");
    h.coset = (cs == "odd") ? Coset::odd : Coset::even;
    if (!(in >> tag >> h.tmax) || tag != "tmax") return fail("missing tmax");
    if (!(in >> tag >> h.min_doubled_trace) || tag != "min_doubled_trace")
        return fail("missing min_doubled_trace");
    if (!(in >> tag >> sum) || tag != "checksum") return fail("missing checksum");
    std::string line;
    std::getline(in, line);
    if (!std::getline(in, line) || line != "---") return fail("missing separator");
    std::ostringstream body;
    while (std::getline(in, line)) body << line << '\n';
    if (fnv1a(body.str()) != sum) return fail("checksum mismatch");

    f = VectorExpansion{};
    f.j = h.j;
    f.k = h.k;
    f.coset = h.coset;
    f.tmax = h.tmax;
    f.min_doubled_trace = h.min_doubled_trace;
    std::istringstream rows(body.str());
    while (std::getline(rows, line)) {
        if (line.empty()) continue;
        std::istringstream row(line);
        Index n;
        if (!(row >> n.nu1 >> n.nu2 >> n.rho)) return fail("bad index row");
        HomogPoly p(h.j);
        std::string tok;
        for (int i = 0; i <= h.j; ++i) {
            if (!(row >> tok)) return fail("short payload row");
            p.c[i] = parse_rat(tok);
        }
        if (row >> tok) return fail("long payload row");
        if (!n.semi_positive() || !n.in_coset(h.coset)) return fail("invalid index");
        f.a[n] = p;
    }
    return true;
}

inline bool load_cache_scalar(const std::string& path, CacheHeader& h, ScalarExpansion& f) {
    VectorExpansion v;
    if (!load_cache(path, h, v)) return false;
    if (h.j != 0) throw std::runtime_error("cache: " + path + ": not a scalar expansion");
    f = ScalarExpansion{};
    f.k = h.k;
    f.coset = h.coset;
    f.tmax = h.tmax;
    f.min_doubled_trace = h.min_doubled_trace;
    for (auto& [n, p] : v.a)
        if (p.c[0] != 0) f.a[n] = p.c[0];
    return true;
}

}  // namespace smf2
