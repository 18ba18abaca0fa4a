#ifndef QUADLIN_ERRORS_HPP
#define QUADLIN_ERRORS_HPP

#include <stdexcept>
#include <string>

namespace quadlin
{

/// Base class of everything the library throws.
class error : public std::runtime_error
{
public:
    using std::runtime_error::runtime_error;
};

// Argument outside the region where a series or formula is valid.
class domain_error : public error
{
public:
    using error::error;
};

class usage_error : public error
{
public:
    using error::error;
};

/// A coefficient was evaluated too close to one of its poles.
class pole_error : public error
{
public:
    pole_error(const std::string& what, double location)
        : error(what + " (at " + std::to_string(location) + ")"), location_(location)
    {
    }

    double location() const noexcept { return location_; }

private:
    double location_;
};

// Operation not defined for the torus regime of the family.
class regime_error : public error
{
public:
    using error::error;
};

class geometry_error : public error
{
public:
    using error::error;
};

class topology_error : public error
{
public:
    using error::error;
};

class flip_error : public error
{
public:
    using error::error;
};

/// Leading coefficient of a quad-equation vanishes for the requested corner.
class singular_face_error : public error
{
public:
    using error::error;
};

class propagation_error : public error
{
public:
    using error::error;
};

// Input field does not solve the equation it is supposed to solve.
class residual_error : public error
{
public:
    using error::error;
};

class solver_error : public error
{
public:
    solver_error(const std::string& what, double condition_estimate)
        : error(what + " (rcond " + std::to_string(condition_estimate) + ")"),
          condition_estimate_(condition_estimate)
    {
    }

    double condition_estimate() const noexcept { return condition_estimate_; }

private:
    double condition_estimate_;
};

class zero_denominator_error : public error
{
public:
    using error::error;
};

/// D^2 = 0 in the triangle-star map: both square roots coincide.
class branch_point_error : public error
{
public:
    using error::error;
};

class inconclusive_error : public error
{
public:
    using error::error;
};

} // namespace quadlin

#endif
