#pragma once

// Pinned per-iteration tracking errors for a few catalog scenarios at 25
// iterations. Regenerate by running the CLI with --iterations 25 on each
// scenario below and copying max_err[k-1] from the summary JSON, then flip
// kPinned back on.

namespace golden {

struct MaxErrPin {
    const char* scenario;
    int channel; // 1-based, matches ScenarioRun::channel of the adaptive runs
    int k;       // iteration index
    double value;
};

inline constexpr bool kPinned = true;

inline constexpr MaxErrPin kMaxErr[] = {
    {"example1-compare", 1, 1, 0.7185313824954909},
    {"example1-compare", 1, 5, 0.6844697234918548},
    {"example1-compare", 1, 25, 0.43444466350957844},
    {"example1-robust-d1", 1, 1, 0.7175415911684496},
    {"example1-robust-d1", 1, 5, 0.6180912073020527},
    {"example1-robust-d1", 1, 25, 0.560111760038168},
    {"example2-dist", 1, 1, 1205.670007969324},
    {"example2-dist", 1, 5, 0.09141179805894842},
    {"example2-dist", 1, 25, 0.10087046108656596},
    {"example2-dist", 2, 1, 950.3147641794411},
    {"example2-dist", 2, 5, 0.06559063356736902},
    {"example2-dist", 2, 25, 0.05927592954866347},
};

}  // namespace golden
