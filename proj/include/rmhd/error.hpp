#ifndef RMHD_ERROR_HPP
#define RMHD_ERROR_HPP

#include <stdexcept>
#include <string>

namespace rmhd {

enum class Errc {
    invalid_primitive,
    outside_domain,
    precondition_violated,
    not_admissible,
    no_convergence,
    nonpositive_scale,
    not_orthogonal,
    invalid_direction,
    not_unit_normal,
    cfl_too_large,
    average_not_admissible,
    index_out_of_range,
    weight_mismatch,
    constraint_infeasible,
    no_exact_solution,
    config_error,
};

const char* errc_name(Errc c);

class Error : public std::runtime_error {
  public:
    Error(Errc code, const std::string& what)
        : std::runtime_error(std::string(errc_name(code)) + ": " + what), code_(code) {}
    Errc code() const { return code_; }

  private:
    Errc code_;
};

[[noreturn]] inline void fail(Errc code, const std::string& what) { throw Error(code, what); }

} // namespace rmhd

#endif
