#include "microformal.h"

#include <cstdlib>
#include <cstring>
#include <sstream>
#include <string>

#include "microformal/errors.hpp"
#include "microformal/morphism_file.hpp"
#include "microformal/verify.hpp"

using namespace microformal;

struct mf_morphism {
    MorphismFile file;
};

namespace {

thread_local std::string last_error;

char* duplicate(const std::string& s) {
    char* out = static_cast<char*>(std::malloc(s.size() + 1));
    if (out)
        std::memcpy(out, s.c_str(), s.size() + 1);
    return out;
}

template <class F>
mf_status guarded(F&& f) {
    try {
        last_error.clear();
        return f();
    } catch (const InternalError& e) {
        last_error = e.what();
        return MF_INTERNAL;
    } catch (const Error& e) {
        last_error = e.what();
        return MF_INVALID;
    } catch (const std::exception& e) {
        last_error = e.what();
        return MF_INTERNAL;
    } catch (...) {
        last_error = "unknown error";
        return MF_INTERNAL;
    }
}

mf_status emit(const std::string& text, char** out) {
    if (!out) {
        last_error = "null output pointer";
        return MF_INVALID;
    }
    *out = duplicate(text);
    return *out ? MF_OK : MF_INTERNAL;
}

std::string render(const PulledBack& p) {
    std::ostringstream os;
    if (p.terms().empty())
        os << "0\n";
    for (std::size_t k = 0; k < p.terms().size(); ++k) {
        std::string tag = p.terms().size() > 1 ? "[" + std::to_string(k + 1) + "]" : "";
        os << "amplitude" << tag << " = " << p.terms()[k].amplitude.str() << "\n";
        os << "phase" << tag << " = " << p.terms()[k].phase.str() << "\n";
    }
    return os.str();
}

} // namespace

extern "C" {

mf_status mf_morphism_parse(const char* text, mf_morphism** out) {
    return guarded([&] {
        if (!text || !out)
            throw ValidationError("null argument");
        *out = new mf_morphism{parse_morphism_file(text)};
        return MF_OK;
    });
}

mf_status mf_morphism_load(const char* path, mf_morphism** out) {
    return guarded([&] {
        if (!path || !out)
            throw ValidationError("null argument");
        *out = new mf_morphism{load_morphism_file(path)};
        return MF_OK;
    });
}

void mf_morphism_free(mf_morphism* m) { delete m; }

mf_status mf_pullback(const mf_morphism* m, int with_exponent, char** out) {
    return guarded([&] {
        if (!m)
            throw ValidationError("null morphism");
        if (m->file.w.empty())
            throw ValidationError("file has no 'w' line to pull back");
        PulledBack p = quantum_pullback(m->file.s, m->file.w);
        std::string text = render(p);
        if (with_exponent)
            text += "exponent = " + exponent_extract(p).str() + "\n";
        return emit(text, out);
    });
}

mf_status mf_classical(const mf_morphism* m, char** out) {
    return guarded([&] {
        if (!m)
            throw ValidationError("null morphism");
        Poly g = classical_input(m->file);
        return emit(classical_pullback(classical_limit(m->file.s), g).str() + "\n", out);
    });
}

mf_status mf_compose(const mf_morphism* first, const mf_morphism* second, char** out) {
    return guarded([&] {
        if (!first || !second)
            throw ValidationError("null morphism");
        if (!(first->file.trunc == second->file.trunc))
            throw ValidationError("truncations differ: " + first->file.trunc.str() + " vs " +
                                  second->file.trunc.str());
        GenFun c = compose(first->file.s, second->file.s);
        return emit(c.str() + "\n", out);
    });
}

mf_status mf_verify(uint64_t seed, int cases, int mutate, char** out) {
    return guarded([&] {
        if (cases < 1)
            throw ValidationError("cases must be positive");
        auto verdicts = run_all_checks(seed, cases, Sizes{}, Truncation{}, mutate != 0);
        std::string text;
        bool all = true;
        for (const auto& v : verdicts) {
            text += v.line() + "\n";
            all = all && v.passed;
        }
        mf_status st = emit(text, out);
        return st == MF_OK && !all ? MF_CHECK_FAILED : st;
    });
}

mf_status mf_covariance(const mf_morphism* m, const char* matrix, int mutate, char** out) {
    return guarded([&] {
        if (!m || !matrix)
            throw ValidationError("null argument");
        if (m->file.w.empty())
            throw ValidationError("file has no 'w' line");
        Matrix a = parse_matrix(matrix);
        if (a.size() != static_cast<std::size_t>(m->file.n2))
            throw MatrixError("matrix size " + std::to_string(a.size()) + " does not match target dimension " +
                              std::to_string(m->file.n2));
        inverse(a);
        Verdict v = linear_covariance_instance(m->file.s, m->file.w, a, 0, mutate != 0);
        mf_status st = emit(v.line() + "\n", out);
        return st == MF_OK && !v.passed ? MF_CHECK_FAILED : st;
    });
}

const char* mf_last_error(void) { return last_error.c_str(); }

void mf_free_string(char* s) { std::free(s); }

} // extern "C"
