#pragma once

#include <optional>
#include <string>

#include "tempscale/trace.hpp"

namespace tempscale {

enum class VerifierKind { BoxedInteger, BoxedExact, ExactMatch, ExternalJudgeStub };

VerifierKind verifier_kind_from_string(const std::string& s);
std::string to_string(VerifierKind kind);

struct VerifierSpec {
    VerifierKind kind = VerifierKind::ExactMatch;
    std::string reference;  // empty only for the judge stub
};

struct BoxedExtraction {
    std::optional<std::string> answer;
    bool parse_error = false;  // unbalanced braces after the last \boxed{
};

/// Content of the LAST \boxed{...} in the text, matched with balanced braces.
BoxedExtraction extract_boxed(const std::string& text);

/// Trim leading/trailing whitespace and collapse internal runs to one space.
std::string normalize_answer(const std::string& s);

/// Compare an extracted answer against the spec. Failures map to Incorrect;
/// only the judge stub yields Unknown.
Verdict check(const std::optional<std::string>& answer, const VerifierSpec& spec);

}  // namespace tempscale
