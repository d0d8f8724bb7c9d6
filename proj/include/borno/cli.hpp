#pragma once

#include <string>
#include <vector>

#include "borno/error.hpp"
#include "borno/json_io.hpp"

namespace borno::cli {

inline constexpr const char* kVersion = "0.1.0";

/// Exit codes of the batch front end.
enum ExitCode : int { kAllPass = 0, kSomeFail = 1, kInconclusive = 2, kInputError = 3, kNumericalError = 4 };

/// Validates an instance {"schema", "command", "payload", "config"?} and runs
/// it. The report carries "verdicts" and "wall_time_ms"; every other field is
/// a function of the instance alone. Throws borno::Error on bad input.
io::Json execute(const io::Json& instance);

/// Exit code implied by a report's verdicts.
int verdict_exit_code(const io::Json& report);

/// Exit code for an error kind.
int error_exit_code(ErrorKind kind);

/// Copy of the report without its timing field.
io::Json without_timing(io::Json report);

std::vector<std::string> fixture_names();
/// Ready-made instance; throws InvalidInput for unknown names.
io::Json make_fixture(const std::string& name);

/// Rows "field,index,value" for every array of scalars in the report.
std::string flatten_csv(const io::Json& report);

/// Command-line entry point.
int main(int argc, char** argv);

}  // namespace borno::cli
