#include "tempscale/verify.hpp"

#include <cctype>
#include <cstdlib>
#include <optional>

#include "tempscale/errors.hpp"

namespace tempscale {

VerifierKind verifier_kind_from_string(const std::string& s) {
    if (s == "boxed_integer") return VerifierKind::BoxedInteger;
    if (s == "boxed_exact") return VerifierKind::BoxedExact;
    if (s == "exact_match") return VerifierKind::ExactMatch;
    if (s == "external_judge_stub") return VerifierKind::ExternalJudgeStub;
    throw ConfigError("unknown verifier kind: " + s);
}

std::string to_string(VerifierKind kind) {
    switch (kind) {
        case VerifierKind::BoxedInteger: return "boxed_integer";
        case VerifierKind::BoxedExact: return "boxed_exact";
        case VerifierKind::ExactMatch: return "exact_match";
        case VerifierKind::ExternalJudgeStub: return "external_judge_stub";
    }
    return "?";
}

BoxedExtraction extract_boxed(const std::string& text) {
    static const std::string marker = "\\boxed{";
    size_t pos = text.rfind(marker);
    if (pos == std::string::npos) return {};

    size_t start = pos + marker.size();
    int depth = 1;
    for (size_t i = start; i < text.size(); ++i) {
        if (text[i] == '{') {
            ++depth;
        } else if (text[i] == '}') {
            --depth;
            if (depth == 0) {
                BoxedExtraction out;
                out.answer = text.substr(start, i - start);
                return out;
            }
        }
    }
    BoxedExtraction out;
    out.parse_error = true;  // ran out of text before the braces balanced
    return out;
}

std::string normalize_answer(const std::string& s) {
    std::string out;
    bool in_space = false;
    for (char c : s) {
        if (std::isspace(static_cast<unsigned char>(c))) {
            in_space = !out.empty();
        } else {
            if (in_space) out += ' ';
            in_space = false;
            out += c;
        }
    }
    return out;
}

namespace {

std::optional<long long> parse_integer(const std::string& s) {
    std::string t = normalize_answer(s);
    if (t.empty()) return std::nullopt;
    size_t i = 0;
    if (t[i] == '+' || t[i] == '-') ++i;
    if (i == t.size()) return std::nullopt;
    for (size_t j = i; j < t.size(); ++j) {
        if (!std::isdigit(static_cast<unsigned char>(t[j]))) return std::nullopt;
    }
    errno = 0;
    char* end = nullptr;
    long long v = std::strtoll(t.c_str(), &end, 10);  // strtoll eats leading zeros
    if (errno == ERANGE || end != t.c_str() + t.size()) return std::nullopt;
    return v;
}

}  // namespace

Verdict check(const std::optional<std::string>& answer, const VerifierSpec& spec) {
    if (spec.kind == VerifierKind::ExternalJudgeStub) return Verdict::Unknown;
    if (!answer) return Verdict::Incorrect;
    switch (spec.kind) {
        case VerifierKind::BoxedInteger: {
            auto got = parse_integer(*answer);
            auto want = parse_integer(spec.reference);
            if (!got || !want) return Verdict::Incorrect;
            return *got == *want ? Verdict::Correct : Verdict::Incorrect;
        }
        case VerifierKind::BoxedExact:
        case VerifierKind::ExactMatch:
            return normalize_answer(*answer) == normalize_answer(spec.reference)
                       ? Verdict::Correct
                       : Verdict::Incorrect;
        case VerifierKind::ExternalJudgeStub:
            break;
    }
    return Verdict::Unknown;
}

}  // namespace tempscale
