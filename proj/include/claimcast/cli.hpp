#ifndef CLAIMCAST_CLI_HPP
#define CLAIMCAST_CLI_HPP

#include <cstdint>
#include <string>

namespace claimcast {

// Shared exit codes: 0 success, 1 input/config error, 2 partial
// convergence, 3 numerical failure.
inline constexpr int kExitOk = 0;
inline constexpr int kExitInput = 1;
inline constexpr int kExitPartial = 2;
inline constexpr int kExitNumerical = 3;

int cmd_fit(const std::string& config_path, const std::string& data_path,
            const std::string& out_path, bool verbose);

int cmd_predict(const std::string& bundle_path, const std::string& data_path,
                const std::string& until, long sims, std::uint64_t seed,
                int threads, const std::string& out_path, bool verbose);

// bins take the form "start:end:count" (count equal bins); intensity_out
// receives the back-predicted intensity on the bin grid
int cmd_backpredict(const std::string& bundle_path, const std::string& bins,
                    const std::string& out_path,
                    const std::string& intensity_out, double z_cap,
                    bool verbose);

int cmd_synth(const std::string& spec_path, const std::string& out_path,
              std::uint64_t seed_override, bool has_seed_override,
              bool verbose);

int cmd_diagnose(const std::string& bundle_path, const std::string& data_path,
                 const std::string& out_dir, bool verbose);

// window takes the form "lo:hi" in days since origin or ISO dates
int cmd_simulate(const std::string& bundle_path, const std::string& data_path,
                 const std::string& window, std::uint64_t seed,
                 const std::string& out_path, bool verbose);

}  // namespace claimcast

#endif  // CLAIMCAST_CLI_HPP
