#include <catch_amalgamated.hpp>

#include "hyprobe/embedding.hpp"

#include <cmath>

#include "test_util.hpp"

using namespace hyprobe;

TEST_CASE("word2vec text with header loads as a 2x3 matrix") {
    TempDir tmp("w2v_text");
    auto p = tmp.file("v.txt", "2 3\napple 1 2 3\npear 4 5 6\n");
    auto m = load_embeddings(p, VectorFormat::word2vec_text);
    REQUIRE(m.size() == 2);
    REQUIRE(m.dim() == 3);
    CHECK(m["pear"][1] == 5.0f);
}

TEST_CASE("glove text infers the dimension from the first row") {
    TempDir tmp("glove_text");
    auto p = tmp.file("v.txt", "apple 1 2 3\npear 4 5 6\n");
    auto m = load_embeddings(p, VectorFormat::glove_text);
    REQUIRE(m.size() == 2);
    CHECK(m.dim() == 3);
}

TEST_CASE("row with wrong width is a load error naming the row") {
    TempDir tmp("bad_width");
    auto p = tmp.file("v.txt", "2 3\napple 1 2 3\npear 4 5\n");
    try {
        load_embeddings(p, VectorFormat::word2vec_text);
        FAIL("expected DataError");
    } catch (const DataError& e) {
        CHECK(std::string(e.what()).find(":3:") != std::string::npos);
    }
}

TEST_CASE("non-numeric field is a load error") {
    TempDir tmp("bad_num");
    auto p = tmp.file("v.txt", "apple 1 x 3\n");
    CHECK_THROWS_AS(load_embeddings(p, VectorFormat::glove_text), DataError);
}

TEST_CASE("duplicate words keep the first occurrence") {
    TempDir tmp("dup");
    auto p = tmp.file("v.txt", "apple 1 2\napple 3 4\n");
    auto m = load_embeddings(p, VectorFormat::glove_text);
    REQUIRE(m.size() == 1);
    CHECK(m["apple"][0] == 1.0f);
}

TEST_CASE("save/load round-trip within 1e-6 across all formats") {
    EmbeddingMatrix m(3);
    m.add("alpha", std::vector<float>{0.123456f, -9.87f, 3.0e-5f});
    m.add("beta", std::vector<float>{1.5f, 2.25f, -0.625f});
    TempDir tmp("rt");
    for (auto fmt : {VectorFormat::word2vec_text, VectorFormat::word2vec_binary,
                     VectorFormat::glove_text}) {
        auto p = tmp.path / ("v" + std::to_string(int(fmt)));
        save_embeddings(m, p, fmt);
        auto back = load_embeddings(p, fmt);
        REQUIRE(back.size() == m.size());
        REQUIRE(back.dim() == m.dim());
        for (const auto& w : m.words())
            for (std::size_t d = 0; d < m.dim(); ++d)
                CHECK(std::fabs(back[w][d] - m[w][d]) < 1e-6);
    }
}

TEST_CASE("empty matrix cannot be saved") {
    EmbeddingMatrix m(3);
    TempDir tmp("empty");
    CHECK_THROWS_AS(save_embeddings(m, tmp.path / "v.txt", VectorFormat::glove_text), DataError);
}

TEST_CASE("a word containing a space cannot be represented") {
    EmbeddingMatrix m(2);
    m.add("two words", std::vector<float>{1.0f, 2.0f});
    TempDir tmp("space");
    CHECK_THROWS_AS(save_embeddings(m, tmp.path / "v.txt", VectorFormat::word2vec_text),
                    DataError);
}

TEST_CASE("missing word lookup names the word") {
    EmbeddingMatrix m(2);
    m.add("here", std::vector<float>{1.0f, 2.0f});
    try {
        (void)m["absent"];
        FAIL("expected DataError");
    } catch (const DataError& e) {
        CHECK(std::string(e.what()).find("absent") != std::string::npos);
    }
}
