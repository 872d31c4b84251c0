#pragma once

#include <map>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "treejudge/chat.hpp"

namespace treejudge {

// Placeholder map for template rendering. Keys are bare placeholder names
// ("problem", "reference code", ...). Values are inserted verbatim and never
// re-scanned, so code or problem text containing braces is safe.
using Bindings = std::map<std::string, std::string, std::less<>>;

struct MissingPlaceholderError : std::runtime_error {
  MissingPlaceholderError(const std::string& template_id,
                          const std::string& placeholder)
      : std::runtime_error("template '" + template_id +
                           "': no binding for placeholder '" + placeholder +
                           "'"),
        placeholder_name(placeholder) {}
  std::string placeholder_name;
};

struct PromptSegment {
  Role role;
  std::string text;  // may contain {name} placeholders; {{ and }} are literals
};

// One role-segmented prompt. Template ids mirror the call tags of the stage
// they serve (subtask, summarize, self_assess, global_eval, gen_cases,
// reformat, validate, simulate_exec, compare_output) plus rm_self_eval for
// the self-evaluation reward ablation.
struct PromptTemplate {
  std::string id;
  CallTag tag = CallTag::kSubtask;
  std::vector<PromptSegment> segments;

  // Placeholder names referenced anywhere in the segments, in first-use order.
  std::vector<std::string> placeholders() const;
};

// Substitutes {name} placeholders in one segment text. Throws
// MissingPlaceholderError when a placeholder has no binding. "{{" and "}}"
// render as literal braces; bound values are inserted without re-scanning.
std::string render_text(std::string_view template_id, std::string_view text,
                        const Bindings& bindings);

// Renders every segment of a template. All messages are non-empty after a
// successful render.
std::vector<ChatMessage> render(const PromptTemplate& tmpl,
                                const Bindings& bindings);

class PromptRegistry {
 public:
  // The built-in corpus: one template per pipeline stage.
  static const PromptRegistry& builtin();

  const PromptTemplate& get(std::string_view id) const;
  const PromptTemplate* find(std::string_view id) const;
  const std::vector<PromptTemplate>& all() const { return templates_; }

  std::vector<ChatMessage> render(std::string_view id,
                                  const Bindings& bindings) const {
    return treejudge::render(get(id), bindings);
  }

 private:
  std::vector<PromptTemplate> templates_;
};

// Bound to the reference-code placeholder when a task carries no reference
// solution or the run disables reference use.
inline constexpr std::string_view kNoReferenceSentinel = "not provided";

// Bound to {history} in the self-assessment prompt when no evaluator has run.
inline constexpr std::string_view kEmptyHistorySentinel = "None";

}  // namespace treejudge
