#ifndef TRAILERNET_HARNESS_EXIT_CODES_HPP
#define TRAILERNET_HARNESS_EXIT_CODES_HPP

namespace tnet::harness {

// `run`, `report`, `codec-dump`
inline constexpr int kExitOk = 0;
inline constexpr int kExitConfig = 2;    ///< bad flags, bad scenario, unwritable output
inline constexpr int kExitAbort = 3;     ///< port conflict, child crash, startup failure
inline constexpr int kExitViolation = 4; ///< run finished but an invariant failed

// `spoof-check`
inline constexpr int kSpoofClean = 0;
inline constexpr int kSpoofDetected = 1;
inline constexpr int kSpoofUsage = 2;     ///< bad flags or mismatched series lengths
inline constexpr int kSpoofMalformed = 5; ///< unparsable CSV row

// `pairing-demo`: 0 Paired, 10 Failed(auth), 11 Failed(factor), 12 otherwise
// (see pairing::exit_code_for)

} // namespace tnet::harness

#endif // TRAILERNET_HARNESS_EXIT_CODES_HPP
