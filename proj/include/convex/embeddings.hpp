#pragma once

// Pre-trained word vectors, phrase averaging and [0,1]-scaled cosine.
//
// Vector file: first line `<count> <dim>`, then `token v1 ... v_dim`.

#include <algorithm>
#include <cctype>
#include <cmath>
#include <istream>
#include <optional>
#include <sstream>
#include <string>
#include <string_view>
#include <unordered_map>
#include <unordered_set>
#include <vector>

#include "convex/error.hpp"

namespace convex {

using Vector = std::vector<double>;

inline const std::unordered_set<std::string>& default_stopwords() {
  static const std::unordered_set<std::string> words = {
      "a",     "an",    "and",   "are",  "as",    "at",   "be",    "but",
      "by",    "did",   "do",    "does", "for",   "from", "had",   "has",
      "have",  "he",    "her",   "his",  "how",   "i",    "in",    "is",
      "it",    "its",   "me",    "my",   "of",    "on",   "or",    "she",
      "so",    "that",  "the",   "their", "them", "then", "there", "these",
      "they",  "this",  "those", "to",   "was",   "were", "what",  "when",
      "where", "which", "who",   "whom", "whose", "why",  "will",  "with",
      "you",   "about", "also",  "any"};
  return words;
}

// Lowercase; split on whitespace and punctuation; strip possessive 's.
// Bytes >= 0x80 are kept as token characters so UTF-8 names survive.
inline std::vector<std::string> tokenize(std::string_view text) {
  std::vector<std::string> tokens;
  std::string current;
  auto flush = [&] {
    if (current.size() >= 2 && current.compare(current.size() - 2, 2, "'s") == 0) {
      current.resize(current.size() - 2);
    }
    std::string cleaned;
    for (char c : current) {
      if (c != '\'') cleaned.push_back(c);
    }
    if (!cleaned.empty()) tokens.push_back(std::move(cleaned));
    current.clear();
  };
  for (std::size_t i = 0; i < text.size(); ++i) {
    auto c = static_cast<unsigned char>(text[i]);
    // U+2019 right single quotation mark, used as an apostrophe.
    if (c == 0xE2 && i + 2 < text.size() &&
        static_cast<unsigned char>(text[i + 1]) == 0x80 &&
        static_cast<unsigned char>(text[i + 2]) == 0x99) {
      current.push_back('\'');
      i += 2;
      continue;
    }
    if (c >= 0x80 || std::isalnum(c)) {
      current.push_back(static_cast<char>(std::tolower(c)));
    } else if (c == '\'' && !current.empty()) {
      current.push_back('\'');
    } else {
      flush();
    }
  }
  flush();
  return tokens;
}

class WordVectorTable {
 public:
  WordVectorTable() = default;
  explicit WordVectorTable(std::size_t dim) : dim_(dim) {
    if (dim == 0) throw Error("word vector dimension must be >= 1");
    stopwords_ = default_stopwords();
  }

  std::size_t dim() const { return dim_; }
  std::size_t size() const { return entries_.size(); }

  void add(std::string token, Vector v) {
    if (v.size() != dim_) {
      throw Error("vector for '" + token + "' has dimension " +
                  std::to_string(v.size()) + ", expected " + std::to_string(dim_));
    }
    for (char& c : token) c = static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
    entries_[std::move(token)] = std::move(v);
  }

  const Vector* find(std::string_view token) const {
    auto it = entries_.find(std::string(token));
    return it == entries_.end() ? nullptr : &it->second;
  }

  bool is_stopword(std::string_view token) const {
    return stopwords_.count(std::string(token)) != 0;
  }
  const std::unordered_set<std::string>& stopwords() const { return stopwords_; }
  void set_stopwords(std::unordered_set<std::string> words) { stopwords_ = std::move(words); }

 private:
  std::size_t dim_ = 1;
  std::unordered_map<std::string, Vector> entries_;
  std::unordered_set<std::string> stopwords_ = default_stopwords();
};

inline WordVectorTable load_vectors(std::istream& in) {
  std::string line;
  if (!std::getline(in, line)) throw ParseError(1, "missing '<count> <dim>' header");
  std::istringstream header(line);
  std::size_t count = 0, dim = 0;
  if (!(header >> count >> dim) || dim == 0) {
    throw ParseError(1, "header must be '<count> <dim>' with dim >= 1");
  }
  WordVectorTable table(dim);
  std::size_t lineno = 1;
  while (std::getline(in, line)) {
    ++lineno;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.find_first_not_of(" \t") == std::string::npos) continue;
    std::istringstream fields(line);
    std::string token;
    fields >> token;
    Vector v;
    v.reserve(dim);
    double x;
    while (fields >> x) v.push_back(x);
    if (!fields.eof()) throw ParseError(lineno, "non-numeric component for '" + token + "'");
    if (v.size() != dim) {
      throw ParseError(lineno, "'" + token + "' has " + std::to_string(v.size()) +
                                   " components, expected " + std::to_string(dim));
    }
    table.add(std::move(token), std::move(v));
  }
  if (table.size() != count) {
    throw ParseError(1, "header announces " + std::to_string(count) + " vectors, found " +
                            std::to_string(table.size()));
  }
  return table;
}

inline std::unordered_set<std::string> load_stopwords(std::istream& in) {
  std::unordered_set<std::string> words;
  std::string line;
  while (std::getline(in, line)) {
    for (auto& t : tokenize(line)) words.insert(std::move(t));
  }
  return words;
}

// Mean of the in-vocabulary token vectors; nullopt if no token qualifies.
inline std::optional<Vector> phrase_vector(const WordVectorTable& t,
                                           const std::vector<std::string>& tokens,
                                           bool drop_stopwords) {
  Vector sum(t.dim(), 0.0);
  std::size_t used = 0;
  for (const auto& tok : tokens) {
    if (drop_stopwords && t.is_stopword(tok)) continue;
    const Vector* v = t.find(tok);
    if (!v) continue;
    for (std::size_t i = 0; i < sum.size(); ++i) sum[i] += (*v)[i];
    ++used;
  }
  if (used == 0) return std::nullopt;
  for (double& x : sum) x /= static_cast<double>(used);
  return sum;
}

inline std::optional<Vector> phrase_vector(const WordVectorTable& t, std::string_view text,
                                           bool drop_stopwords) {
  return phrase_vector(t, tokenize(text), drop_stopwords);
}

// Cosine rescaled from [-1, 1] to [0, 1]. A zero vector scores 0.
inline double similarity(const Vector& a, const Vector& b) {
  if (a.size() != b.size()) throw Error("similarity: dimension mismatch");
  double dot = 0, na = 0, nb = 0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    dot += a[i] * b[i];
    na += a[i] * a[i];
    nb += b[i] * b[i];
  }
  if (na == 0 || nb == 0) return 0.0;
  double cos = dot / (std::sqrt(na) * std::sqrt(nb));
  cos = std::clamp(cos, -1.0, 1.0);
  return (cos + 1.0) / 2.0;
}

}  // namespace convex
