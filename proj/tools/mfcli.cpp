// mfcli: command-line frontend over the microformal C interface.
//
//   mfcli pullback FILE [--exponent]
//   mfcli classical FILE
//   mfcli compose FILE1 FILE2
//   mfcli verify [--seed N] [--cases N] [--mutate]
//   mfcli covariance FILE --matrix "a,b;c,d" [--mutate]
//
// Exit status: 0 success, 1 failed check, 2 bad input.

#include <cstdio>
#include <memory>
#include <string>

#include "CLI11.hpp"
#include "microformal.h"

namespace {

using Handle = std::unique_ptr<mf_morphism, decltype(&mf_morphism_free)>;

int report(mf_status st, char* out) {
    if (out) {
        std::fputs(out, stdout);
        mf_free_string(out);
    }
    if (st == MF_INVALID || st == MF_INTERNAL)
        std::fprintf(stderr, "error: %s\n", mf_last_error());
    switch (st) {
    case MF_OK:
        return 0;
    case MF_CHECK_FAILED:
        return 1;
    case MF_INVALID:
        return 2;
    default:
        return 3;
    }
}

// Loads path into h; on failure prints the error and returns false.
bool load(const std::string& path, Handle& h) {
    mf_morphism* m = nullptr;
    if (mf_morphism_load(path.c_str(), &m) != MF_OK) {
        std::fprintf(stderr, "error: %s: %s\n", path.c_str(), mf_last_error());
        return false;
    }
    h.reset(m);
    return true;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"Formal quantum pullbacks along microformal morphisms"};
    app.require_subcommand(1);

    std::string file, file2, matrix;
    bool exponent = false, mutate = false;
    std::uint64_t seed = 0;
    int cases = 1;

    auto* pullback = app.add_subcommand("pullback", "Pull the file's wave function back along S");
    pullback->add_option("file", file, "Morphism file")->required();
    pullback->add_flag("--exponent", exponent, "Also print the extracted exponent");

    auto* classical = app.add_subcommand("classical", "Classical pullback of the file's pure phase");
    classical->add_option("file", file, "Morphism file")->required();

    auto* composition = app.add_subcommand("compose", "Generating function of the composite morphism");
    composition->add_option("first", file, "Morphism M1 => M2")->required();
    composition->add_option("second", file2, "Morphism M2 => M3")->required();

    auto* verify = app.add_subcommand("verify", "Run the oracle checks on random instances");
    verify->add_option("--seed", seed, "First seed");
    verify->add_option("--cases", cases, "Number of seeds")->check(CLI::PositiveNumber);
    verify->add_flag("--mutate", mutate, "Run the negative controls instead");

    auto* covariance = app.add_subcommand("covariance", "Linear covariance check for the file's S and w");
    covariance->add_option("file", file, "Morphism file")->required();
    covariance->add_option("--matrix", matrix, "Rows separated by ';', entries by ','")->required();
    covariance->add_flag("--mutate", mutate, "Run the negative control instead");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        int code = app.exit(e);
        return code == 0 ? 0 : 2;
    }

    char* out = nullptr;
    Handle first(nullptr, mf_morphism_free), second(nullptr, mf_morphism_free);
    if (*pullback) {
        if (!load(file, first))
            return 2;
        mf_status st = mf_pullback(first.get(), exponent ? 1 : 0, &out);
        return report(st, out);
    }
    if (*classical) {
        if (!load(file, first))
            return 2;
        mf_status st = mf_classical(first.get(), &out);
        return report(st, out);
    }
    if (*composition) {
        if (!load(file, first) || !load(file2, second))
            return 2;
        mf_status st = mf_compose(first.get(), second.get(), &out);
        return report(st, out);
    }
    if (*verify) {
        mf_status st = mf_verify(seed, cases, mutate ? 1 : 0, &out);
        return report(st, out);
    }
    if (!load(file, first))
        return 2;
    mf_status st = mf_covariance(first.get(), matrix.c_str(), mutate ? 1 : 0, &out);
    return report(st, out);
}
