#pragma once

// Line-oriented persistent cache for the bracket memo table.
//
//   wpvol-bracket-cache v1
//   g n|d1 d2 ... dn|num/den|piexp
//   ...
//   #sha256:<hex>
//
// Records are in canonical key order with d descending and num/den
// reduced; piexp = 3g-3+n-|d|. The checksum covers the record lines
// (each including its newline). Writes go through a temp file and a
// rename, so a crashed writer never leaves a half-written cache.

#include <openssl/evp.h>

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include "wpvol/bracket.hpp"

namespace wpvol {

class CacheError : public std::runtime_error {
  public:
    CacheError(const std::string& path, std::size_t line, const std::string& what)
        : std::runtime_error(path + ":" + std::to_string(line) + ": " + what) {}
};

namespace cache_detail {

inline const char* kHeader = "wpvol-bracket-cache v1";

inline std::string sha256_hex(const std::string& data) {
    unsigned char digest[EVP_MAX_MD_SIZE];
    unsigned int len = 0;
    if (EVP_Digest(data.data(), data.size(), digest, &len, EVP_sha256(), nullptr) != 1)
        throw std::runtime_error("sha256 computation failed");
    static const char* hex = "0123456789abcdef";
    std::string out;
    out.reserve(2 * len);
    for (unsigned int i = 0; i < len; ++i) {
        out.push_back(hex[digest[i] >> 4]);
        out.push_back(hex[digest[i] & 0xf]);
    }
    return out;
}

inline std::string record_line(const BracketKey& k, const PiScalar& v) {
    std::string s = std::to_string(k.g) + " " + std::to_string(k.n()) + "|";
    for (int i = 0; i < k.n(); ++i) s += (i ? " " : "") + std::to_string(k.d[i]);
    s += "|" + v.coeff().get_num().get_str() + "/" + v.coeff().get_den().get_str();
    s += "|" + std::to_string(v.pi_exp());
    return s;
}

}  // namespace cache_detail

// Canonical dump of the memo table (exactly what cache_save writes).
inline std::string cache_render(const BracketEngine& engine) {
    std::string body;
    for (const auto& [key, value] : engine.snapshot())
        body += cache_detail::record_line(key, value) + "\n";
    return std::string(cache_detail::kHeader) + "\n" + body +
           "#sha256:" + cache_detail::sha256_hex(body) + "\n";
}

inline std::size_t cache_save(const BracketEngine& engine, const std::string& path) {
    const std::size_t count = engine.memo_size();
    std::string contents = cache_render(engine);
    std::filesystem::path target(path);
    std::filesystem::path tmp = target;
    tmp += ".tmp";
    {
        std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
        if (!out) throw std::runtime_error("cache_save: cannot open " + tmp.string());
        out.write(contents.data(), static_cast<std::streamsize>(contents.size()));
        if (!out) throw std::runtime_error("cache_save: short write to " + tmp.string());
    }
    std::filesystem::rename(tmp, target);
    return count;
}

inline std::size_t cache_load(BracketEngine& engine, const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw std::runtime_error("cache_load: cannot open " + path);
    std::string line;
    std::size_t lineno = 1;
    if (!std::getline(in, line) || line != cache_detail::kHeader)
        throw CacheError(path, 1, "version mismatch: expected '" +
                                      std::string(cache_detail::kHeader) + "'");
    std::string body;
    std::size_t count = 0;
    bool saw_checksum = false;
    while (std::getline(in, line)) {
        ++lineno;
        if (line.rfind("#sha256:", 0) == 0) {
            std::string expect = line.substr(8);
            std::string actual = cache_detail::sha256_hex(body);
            if (expect != actual)
                throw CacheError(path, lineno, "checksum failure: file says " + expect +
                                                   ", records hash to " + actual);
            saw_checksum = true;
            continue;
        }
        if (saw_checksum) throw CacheError(path, lineno, "data after checksum line");
        body += line + "\n";

        // g n|d...|num/den|piexp
        std::size_t p1 = line.find('|');
        std::size_t p2 = (p1 == std::string::npos) ? p1 : line.find('|', p1 + 1);
        std::size_t p3 = (p2 == std::string::npos) ? p2 : line.find('|', p2 + 1);
        if (p3 == std::string::npos) throw CacheError(path, lineno, "malformed record");
        try {
            std::istringstream head(line.substr(0, p1));
            int g = 0, n = 0;
            if (!(head >> g >> n) || n < 1) throw std::invalid_argument("bad g/n");
            std::istringstream dstr(line.substr(p1 + 1, p2 - p1 - 1));
            std::vector<int> d;
            int x = 0;
            while (dstr >> x) d.push_back(x);
            if (static_cast<int>(d.size()) != n) throw std::invalid_argument("d count != n");
            for (std::size_t i = 1; i < d.size(); ++i)
                if (d[i] > d[i - 1]) throw std::invalid_argument("d not descending");

            std::string frac = line.substr(p2 + 1, p3 - p2 - 1);
            std::size_t slash = frac.find('/');
            if (slash == std::string::npos) throw std::invalid_argument("missing '/'");
            BigInt num(frac.substr(0, slash));
            BigInt den(frac.substr(slash + 1));
            if (den <= 0) throw std::invalid_argument("non-positive denominator");
            BigInt g_ = gcd(num, den);
            if (g_ != 1) throw std::invalid_argument("unreduced fraction");
            long piexp = std::stol(line.substr(p3 + 1));

            BracketKey key(g, d);
            if (piexp != key.dim() - key.dsum())
                throw std::invalid_argument("piexp inconsistent with key");
            BigRational coeff(num);
            coeff /= BigRational(den);
            engine.insert_raw(key, PiScalar(coeff, piexp));
            ++count;
        } catch (const std::exception& ex) {
            throw CacheError(path, lineno, std::string("malformed record: ") + ex.what());
        }
    }
    if (!saw_checksum) throw CacheError(path, lineno, "missing checksum line");
    return count;
}

}  // namespace wpvol
