#include <cmath>
#include <sstream>

#include "doctest.h"
#include "infosum/corpus.h"
#include "infosum/error.h"
#include "infosum/text_util.h"
#include "infosum/unicode.h"

using namespace infosum;

namespace {

std::vector<std::string> surfaces(const std::vector<Token>& tokens) {
  std::vector<std::string> out;
  for (const auto& t : tokens) out.push_back(t.surface);
  return out;
}

Corpus corpus_from(const std::string& text) {
  std::istringstream in(text);
  return parse_corpus(in);
}

}  // namespace

TEST_CASE("tokenize splits words and punctuation runs") {
  CHECK(tokenize("").empty());

  const auto t = tokenize("Hello, world!");
  REQUIRE(t.size() == 4);
  CHECK(surfaces(t) == std::vector<std::string>{"Hello", ",", "world", "!"});
  CHECK(t[0].is_word);
  CHECK(t[1].is_punct);
  CHECK(t[2].is_word);
  CHECK(t[3].is_punct);
  CHECK(t[0].lower == "hello");
  CHECK(t[2].begin == 7);
  CHECK(t[2].end == 12);
}

TEST_CASE("tokenize keeps interior apostrophes") {
  CHECK(surfaces(tokenize("We're here.")) == std::vector<std::string>{"We're", "here", "."});
  CHECK(surfaces(tokenize("don’t")) == std::vector<std::string>{"don’t"});
  // leading / trailing apostrophes are punctuation
  CHECK(surfaces(tokenize("'tis dogs'")) == std::vector<std::string>{"'", "tis", "dogs", "'"});
  CHECK(surfaces(tokenize("''We're not,''")) == std::vector<std::string>{"''", "We're", "not", ",''"});
}

TEST_CASE("tokenize handles unicode whitespace, punctuation and case") {
  const auto t = tokenize("Straße ¿Qué?—fin");
  CHECK(surfaces(t) == std::vector<std::string>{"Straße", "¿", "Qué", "?—", "fin"});
  CHECK(t[0].lower == "strasse");
  CHECK(t[2].lower == "qué");
  for (const auto& tok : t) CHECK(tok.is_word != tok.is_punct);
}

TEST_CASE("token offsets reproduce the surface") {
  const std::string text = "  Aé b--c.  d'e ";
  for (const auto& t : tokenize(text)) CHECK(text.substr(t.begin, t.end - t.begin) == t.surface);
}

TEST_CASE("invalid UTF-8 does not stall the tokenizer") {
  const std::string bad = std::string("ab\xff") + "cd";
  const auto t = tokenize(bad);
  REQUIRE(t.size() == 1);
  CHECK(t[0].surface == bad);
}

TEST_CASE("unicode helpers") {
  CHECK(unicode::is_punctuation(U'!'));
  CHECK(unicode::is_punctuation(U'“'));
  CHECK_FALSE(unicode::is_punctuation(U'$'));  // Sc, not P*
  CHECK_FALSE(unicode::is_punctuation(U'a'));
  CHECK(unicode::is_space(U'　'));
  CHECK(unicode::casefold("İstanbul") == "i̇stanbul");
  CHECK(unicode::casefold("ΣΑ") == "σα");
  std::string s;
  unicode::append_utf8(s, U'\U0001F600');
  CHECK(s.size() == 4);
  CHECK(unicode::decode(s, 0).cp == U'\U0001F600');
}

TEST_CASE("word_count ignores punctuation and is additive") {
  const std::vector<Sentence> none;
  CHECK(word_count(none) == 0);
  const auto one = make_sentences(std::vector<std::string>{"Hello, world!"});
  CHECK(word_count(one) == 2);
  const auto two = make_sentences(std::vector<std::string>{"Hello, world!", "Hello, world!"});
  CHECK(word_count(two) == 4);
  CHECK(two[1].id == 1);
}

TEST_CASE("parse_corpus builds documents with contiguous sentence ids") {
  CHECK(corpus_from("").empty());
  CHECK(corpus_from("").idf_table().empty());

  const auto c = corpus_from(R"({"doc_id":"d1","section":"Business","sentences":["One.","Two."]})" "\n");
  REQUIRE(c.size() == 1);
  const auto& doc = c.documents()[0];
  CHECK(doc.sentences.size() == 2);
  CHECK(doc.sentences[0].id == 0);
  CHECK(doc.sentences[1].id == 1);
  CHECK_FALSE(doc.has_summary());
  CHECK(c.find("d1") == &doc);
  CHECK(c.find("nope") == nullptr);
}

TEST_CASE("idf follows ln((1+N)/(1+df)) + 1 over article word types") {
  const auto c = corpus_from(
      R"({"doc_id":"a","section":"s","sentences":["Iran talks.","Talks resume."],"summary":["Iran iran."]})" "\n"
      R"({"doc_id":"b","section":"s","sentences":["Markets fell."],"summary":["Iran."]})" "\n"
      "\n"
      R"({"doc_id":"c","section":"s","sentences":["Talks, again!"]})" "\n");
  CHECK(c.size() == 3);
  CHECK(c.document_frequency("iran") == 1);  // summaries are not counted
  CHECK(c.idf("iran") == doctest::Approx(1.6931471805599453).epsilon(1e-12));
  CHECK(c.idf("iran") == doctest::Approx(std::log(4.0 / 2.0) + 1.0).epsilon(1e-15));
  CHECK(c.document_frequency("talks") == 2);
  CHECK(c.idf("unseen") == doctest::Approx(std::log(4.0) + 1.0));
  CHECK(c.idf_table().count(",") == 0);
}

TEST_CASE("parse_corpus errors carry line numbers") {
  SUBCASE("malformed JSON") {
    try {
      corpus_from(R"({"doc_id":"a","section":"s","sentences":["x"]})" "\n{oops\n");
      FAIL("expected a parse error");
    } catch (const ParseError& e) {
      CHECK(e.line() == 2);
    }
  }
  SUBCASE("duplicate doc_id") {
    CHECK_THROWS_AS(corpus_from(R"({"doc_id":"a","section":"s","sentences":["x"]})" "\n"
                                R"({"doc_id":"a","section":"s","sentences":["y"]})" "\n"),
                    ParseError);
  }
  SUBCASE("no sentences") {
    CHECK_THROWS_AS(corpus_from(R"({"doc_id":"a","section":"s","sentences":[]})" "\n"), ParseError);
  }
  SUBCASE("non-string sentence") {
    CHECK_THROWS_AS(corpus_from(R"({"doc_id":"a","section":"s","sentences":[3]})" "\n"), ParseError);
  }
  SUBCASE("duplicate ids in the constructor") {
    std::vector<Document> docs(2);
    docs[0].doc_id = docs[1].doc_id = "x";
    try {
      Corpus c(std::move(docs));
      FAIL("expected duplicate-doc-id");
    } catch (const Error& e) {
      CHECK(e.code() == "duplicate-doc-id");
    }
  }
}

TEST_CASE("write_corpus round-trips") {
  const std::string text =
      R"({"doc_id":"a","section":"Business","sentences":["Café \"open\".","B."],"summary":["Open."]})" "\n"
      R"({"doc_id":"b","section":"Politics","sentences":["C?"],"summary":null})" "\n";
  const auto c = corpus_from(text);
  std::ostringstream out;
  write_corpus(out, c);
  const auto again = corpus_from(out.str());
  CHECK(again == c);
  std::ostringstream out2;
  write_corpus(out2, again);
  CHECK(out2.str() == out.str());
}

TEST_CASE("text utilities") {
  CHECK(parse_double("+1.5") == 1.5);
  CHECK(parse_double(" 2 ") == 2.0);
  CHECK(parse_double("2x") == std::nullopt);
  CHECK(parse_double("inf") == std::nullopt);
  CHECK(parse_double("1e3") == 1000.0);
  CHECK(format_double(0.1) == "0.1");
  CHECK(parse_double(format_double17(1.0 / 3.0)) == 1.0 / 3.0);
  CHECK(trim("  x \t") == "x");
  CHECK(split("a,,b", ',').size() == 3);
}
