#pragma once

namespace borno {

enum class Verdict { Pass, Fail, Inconclusive };

const char* to_string(Verdict v);

/// Fail dominates, then inconclusive.
Verdict combine(Verdict a, Verdict b);

enum class Decision { Yes, No, Inconclusive };

const char* to_string(Decision d);

}  // namespace borno
