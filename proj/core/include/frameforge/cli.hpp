#pragma once

// Command-line surface. Subcommands:
//   analyze <frame-file>                  all six verdicts or a budget error
//   construct <kind> [params]             full-spark | an | pairs | three-riesz
//                                         | nested-union | trap | ffs
//   lift <frame-file> --k <int>
//   verify-seq <seq-header> --levels <list> --claim <tag>
//   certify <frame-file> <x> <y>
//   delete-test <frame-file> --index <int>
// Common flags: --tol-rank --tol-cert --seed --budget --out --format
// (text | report) --timings. FRAMEFORGE_SEED supplies the seed default; "-"
// reads the frame from stdin. Exit 0: verdict computed (FAILS included);
// exit 1: usage error; exit 2: budget or construction error. Identical
// arguments and seed produce byte-identical output.

#include <iosfwd>
#include <string>
#include <vector>

namespace frameforge {

int run_cli(const std::vector<std::string>& args, std::ostream& out,
            std::ostream& err);

}  // namespace frameforge
