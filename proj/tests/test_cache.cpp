#include <catch2/catch_amalgamated.hpp>

#include <filesystem>
#include <fstream>

#include "wpvol/bracket_cache.hpp"

using namespace wpvol;

namespace {

std::filesystem::path temp_file(const char* name) {
    return std::filesystem::temp_directory_path() / name;
}

void write_file(const std::filesystem::path& p, const std::string& text) {
    std::ofstream out(p, std::ios::binary | std::ios::trunc);
    out << text;
}

std::string with_checksum(const std::string& body) {
    return std::string(cache_detail::kHeader) + "\n" + body +
           "#sha256:" + cache_detail::sha256_hex(body) + "\n";
}

}  // namespace

TEST_CASE("save/load round trip is the identity") {
    BracketEngine a;
    a.ensure_weight(5);
    auto path = temp_file("wpvol_cache_rt.txt");
    std::size_t saved = cache_save(a, path.string());
    CHECK(saved == a.memo_size());
    CHECK(saved > 100);
    CHECK_FALSE(std::filesystem::exists(path.string() + ".tmp"));

    BracketEngine b;
    CHECK(cache_load(b, path.string()) == saved);
    auto sa = a.snapshot(), sb = b.snapshot();
    REQUIRE(sa.size() == sb.size());
    for (std::size_t i = 0; i < sa.size(); ++i) {
        CHECK(sa[i].first == sb[i].first);
        CHECK(sa[i].second == sb[i].second);
    }
    // canonical dump identical byte for byte
    CHECK(cache_render(a) == cache_render(b));
    std::filesystem::remove(path);
}

TEST_CASE("empty cache file with valid header loads zero records") {
    BracketEngine empty_engine;
    auto path = temp_file("wpvol_cache_empty.txt");
    cache_save(empty_engine, path.string());
    BracketEngine e;
    CHECK(cache_load(e, path.string()) == 0);
    CHECK(e.memo_size() == 0);
    std::filesystem::remove(path);
}

TEST_CASE("a single record restores the bracket") {
    auto path = temp_file("wpvol_cache_one.txt");
    write_file(path, with_checksum("0 4|0 0 0 0|2/1|1\n"));
    BracketEngine e;
    CHECK(cache_load(e, path.string()) == 1);
    CHECK(e.bracket(0, {0, 0, 0, 0}) == PiScalar(BigRational(2), 1));
    std::filesystem::remove(path);
}

TEST_CASE("format errors are fatal and carry line numbers") {
    auto path = temp_file("wpvol_cache_bad.txt");
    BracketEngine e;

    write_file(path, "wpvol-bracket-cache v2\n");
    CHECK_THROWS_WITH(cache_load(e, path.string()),
                      Catch::Matchers::ContainsSubstring(":1:") &&
                          Catch::Matchers::ContainsSubstring("version mismatch"));

    write_file(path, with_checksum("0 4|0 0 0|2/1|1\n"));  // d count != n
    CHECK_THROWS_WITH(cache_load(e, path.string()),
                      Catch::Matchers::ContainsSubstring(":2:") &&
                          Catch::Matchers::ContainsSubstring("malformed"));

    write_file(path, with_checksum("0 4|0 0 0 0|4/2|1\n"));  // unreduced
    CHECK_THROWS_WITH(cache_load(e, path.string()),
                      Catch::Matchers::ContainsSubstring("malformed"));

    write_file(path, with_checksum("0 4|0 0 0 0|2/1|2\n"));  // wrong pi exponent
    CHECK_THROWS_WITH(cache_load(e, path.string()),
                      Catch::Matchers::ContainsSubstring("malformed"));

    // checksum over tampered body
    std::string good = with_checksum("0 4|0 0 0 0|2/1|1\n");
    auto pos = good.find("2/1");
    good.replace(pos, 3, "3/1");
    write_file(path, good);
    CHECK_THROWS_WITH(cache_load(e, path.string()),
                      Catch::Matchers::ContainsSubstring("checksum failure"));

    write_file(path, std::string(cache_detail::kHeader) + "\n0 4|0 0 0 0|2/1|1\n");
    CHECK_THROWS_WITH(cache_load(e, path.string()),
                      Catch::Matchers::ContainsSubstring("missing checksum"));

    std::filesystem::remove(path);
}
