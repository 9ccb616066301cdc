#pragma once

#include <string>
#include <vector>

namespace wavecharge {

// Status mirror of the C API: 0 ok, 1 invalid argument, 2 config error,
// 3 check failed, 4 io error, 5 internal error.
struct RunOutcome {
    int status = 0;
    std::string message;
};

std::vector<std::string> subcommand_names();
RunOutcome validate_config_file(const std::string& config_path);
RunOutcome run_subcommand(const std::string& name, const std::string& config_path,
                          const std::string& out_dir, int workers);

}  // namespace wavecharge
