#include "treejudge/verdict.hpp"

#include <cctype>
#include <vector>

#include "treejudge/log.hpp"

namespace treejudge {
namespace {

// Alphabetic runs, lowercased. Digits and punctuation split words, so "Yes."
// and "**MATCH**" tokenize cleanly.
std::vector<std::string> words_of(std::string_view text) {
  std::vector<std::string> words;
  std::string current;
  for (unsigned char c : text) {
    if (std::isalpha(c)) {
      current.push_back(static_cast<char>(std::tolower(c)));
    } else if (!current.empty()) {
      words.push_back(std::move(current));
      current.clear();
    }
  }
  if (!current.empty()) words.push_back(std::move(current));
  return words;
}

}  // namespace

std::string_view to_string(Verdict v) {
  return v == Verdict::kYes ? "Yes" : "No";
}

std::string_view to_string(ParsedVerdict v) {
  switch (v) {
    case ParsedVerdict::kYes: return "Yes";
    case ParsedVerdict::kNo: return "No";
    case ParsedVerdict::kUnparseable: return "Unparseable";
  }
  return "Unparseable";
}

std::string_view to_string(Vote v) { return v == Vote::kPass ? "PASS" : "FAIL"; }

std::string_view to_string(MatchVote v) {
  return v == MatchVote::kMatch ? "MATCH" : "NOT MATCH";
}

ParsedVerdict parse_binary_verdict(std::string_view text) {
  for (const auto& w : words_of(text)) {
    if (w == "yes") return ParsedVerdict::kYes;
    if (w == "no") return ParsedVerdict::kNo;
  }
  return ParsedVerdict::kUnparseable;
}

Vote parse_pass_fail(std::string_view text) {
  for (const auto& w : words_of(text)) {
    if (w == "pass") return Vote::kPass;
    if (w == "fail") return Vote::kFail;
  }
  return Vote::kFail;
}

MatchVote parse_match(std::string_view text) {
  const auto words = words_of(text);
  for (std::size_t i = 0; i < words.size(); ++i) {
    if (words[i] == "match") {
      if (i > 0 && words[i - 1] == "not") return MatchVote::kNotMatch;
      return MatchVote::kMatch;
    }
  }
  return MatchVote::kNotMatch;
}

Verdict unparseable_as_no(ParsedVerdict v, std::string_view context) {
  switch (v) {
    case ParsedVerdict::kYes: return Verdict::kYes;
    case ParsedVerdict::kNo: return Verdict::kNo;
    case ParsedVerdict::kUnparseable:
      logging::warn("unparseable binary verdict in " + std::string(context) +
                    "; counting as No");
      return Verdict::kNo;
  }
  return Verdict::kNo;
}

}  // namespace treejudge
