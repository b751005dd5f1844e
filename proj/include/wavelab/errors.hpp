#ifndef WAVELAB_ERRORS_HPP
#define WAVELAB_ERRORS_HPP

#include <stdexcept>
#include <string>

namespace wavelab {

/// Base class for all library errors.
class error : public std::runtime_error {
  public:
    explicit error(const std::string& what) : std::runtime_error(what) {}
};

class grid_mismatch_error : public error {
  public:
    using error::error;
};

class parameter_error : public error {
  public:
    using error::error;
};

class index_error : public error {
  public:
    using error::error;
};

class invalid_multiplier_error : public error {
  public:
    using error::error;
};

/// Straightening map failed: min over the strip of dz_rho is not positive.
class diffeo_error : public error {
  public:
    diffeo_error(const std::string& what, double min_dz_rho) : error(what), min_dz_rho(min_dz_rho) {}
    double min_dz_rho;
};

/// Elliptic symbol/coefficient lost positivity.
class ellipticity_error : public error {
  public:
    using error::error;
};

class solver_error : public error {
  public:
    solver_error(const std::string& what, int iterations, double residual)
        : error(what), iterations(iterations), residual(residual) {}
    int iterations;
    double residual;
};

/// Taylor sign condition a >= c > 0 violated.
class taylor_sign_error : public error {
  public:
    taylor_sign_error(const std::string& what, double t, double a_min) : error(what), t(t), a_min(a_min) {}
    double t;
    double a_min;
};

/// NaN/overflow during time integration; carries the last valid time.
class blowup_error : public error {
  public:
    blowup_error(const std::string& what, double t_last) : error(what), t_last(t_last) {}
    double t_last;
};

class sampling_error : public error {
  public:
    using error::error;
};

class io_error : public error {
  public:
    using error::error;
};

class config_error : public error {
  public:
    using error::error;
};

}  // namespace wavelab

#endif
