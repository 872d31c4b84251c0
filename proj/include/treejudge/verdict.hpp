#pragma once

#include <string>
#include <string_view>

namespace treejudge {

enum class Verdict { kYes, kNo };

// Raw parse result of a "Yes or No only" style answer. Callers decide how
// Unparseable maps; the engine's convention is conservative (counts as No
// for subtask summaries and global evaluations, as Include for the
// selection self-assessment whose prompt defaults to Yes).
enum class ParsedVerdict { kYes, kNo, kUnparseable };

enum class Vote { kPass, kFail };
enum class MatchVote { kMatch, kNotMatch };

std::string_view to_string(Verdict v);
std::string_view to_string(ParsedVerdict v);
std::string_view to_string(Vote v);
std::string_view to_string(MatchVote v);

// Case-insensitive match of the first standalone yes/no word in `text`,
// punctuation stripped. "Final Answer: Yes." -> Yes; "know" never matches.
ParsedVerdict parse_binary_verdict(std::string_view text);

// First standalone PASS/FAIL word; anything else is a FAIL vote.
Vote parse_pass_fail(std::string_view text);

// First standalone MATCH, honoring a preceding NOT ("**NOT MATCH**").
// A response with neither counts as NotMatch.
MatchVote parse_match(std::string_view text);

// Unparseable -> No, logging a warning tagged with `context`.
Verdict unparseable_as_no(ParsedVerdict v, std::string_view context);

}  // namespace treejudge
