// Runs the acceptance checks; an optional argument restricts them to one suite.
#include <iostream>

#include "qecbound/verify.hpp"

int main(int argc, char **argv) {
    qecbound::VerifyOptions opts;
    if (argc > 1) {
        opts.only = argv[1];
    }
    try {
        const auto results = qecbound::run_verify(opts, std::cout);
        for (const auto &r : results) {
            if (!r.passed) {
                return 1;
            }
        }
        return results.empty() ? 1 : 0;
    } catch (const std::exception &e) {
        std::cerr << e.what() << "\n";
        return 2;
    }
}
