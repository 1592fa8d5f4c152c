#ifndef RMHD_PARALLEL_HPP
#define RMHD_PARALLEL_HPP

#include <mutex>
#include <string>
#include <utility>

#include "rmhd/error.hpp"

#ifdef _OPENMP
#include <omp.h>
#endif

namespace rmhd {

// Execution policy for the per-cell / per-trial kernels.  Every kernel has
// identical arithmetic per index, so serial and parallel runs produce
// bitwise-identical grids; the serial path is kept as the reference the
// tests compare against.
enum class Exec { serial, parallel };

inline int hardware_threads() {
#ifdef _OPENMP
    return omp_get_max_threads();
#else
    return 1;
#endif
}

inline void set_thread_count(int n) {
#ifdef _OPENMP
    if (n > 0) omp_set_num_threads(n);
#else
    (void)n;
#endif
}

template <typename F>
void parallel_for(int n, Exec exec, F&& f) {
    if (exec == Exec::parallel) {
#ifdef _OPENMP
#pragma omp parallel for schedule(static)
#endif
        for (int i = 0; i < n; ++i) f(i);
    } else {
        for (int i = 0; i < n; ++i) f(i);
    }
}

// Exceptions must not unwind out of an OpenMP region; loop bodies run under
// guard() and the first captured error is rethrown after the join.
class ErrorCapture {
  public:
    template <typename G>
    void guard(G&& g) noexcept {
        try {
            g();
        } catch (const Error& e) {
            // strip the code prefix; rethrow() reattaches it
            const std::string prefix = std::string(errc_name(e.code())) + ": ";
            std::string msg = e.what();
            if (msg.rfind(prefix, 0) == 0) msg = msg.substr(prefix.size());
            store(e.code(), msg);
        } catch (const std::exception& e) {
            store(Errc::precondition_violated, e.what());
        }
    }

    bool failed() const { return failed_; }

    void rethrow() const {
        if (failed_) throw Error(code_, message_);
    }

  private:
    void store(Errc code, const std::string& msg) {
        std::lock_guard<std::mutex> lock(mutex_);
        if (!failed_) {
            failed_ = true;
            code_ = code;
            message_ = msg;
        }
    }

    std::mutex mutex_;
    bool failed_ = false;
    Errc code_ = Errc::precondition_violated;
    std::string message_;
};

} // namespace rmhd

#endif
