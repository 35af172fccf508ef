#pragma once

#include <iosfwd>
#include <optional>
#include <string>

#include "parhodge/nahc.hpp"

namespace parhodge {

enum class ObjectKind { connection, higgs, gauge };

// parsed problem file: one matrix of truncated Laurent series over an
// explicit field, with an optional weight
struct Problem {
    FieldCtxPtr ctx;
    std::size_t n = 0;
    std::int64_t precision = 0;
    std::optional<TameWeight> theta;
    ObjectKind kind = ObjectKind::connection;
    MatSeries matrix;
};

Problem parse_problem(const std::string& text);
Problem parse_problem_file(const std::string& path);
std::string emit_problem(const Problem& p); // canonical form, byte-stable

// certificates: the ordered step list of a pipeline plus its outputs; replay
// applies the steps to the input and compares with phi
struct Certificate {
    std::string pipeline;
    std::string input_digest;
    NahcResult result;
};

std::string emit_certificate(const Certificate& c);
Certificate parse_certificate(const std::string& text);
Certificate parse_certificate_file(const std::string& path);

// certificate for the plain normal form (single gauge step, B instead of phi)
struct NormalFormCertificate {
    std::string input_digest;
    MatSeries B;
    GaugeElement g;
    ConstMat tau; // conj-frame rational part of the residue
    FieldCtxPtr tau_ctx;
};
std::string emit_normal_form_certificate(const NormalFormCertificate& c);

std::uint64_t fnv1a(const std::string& data);
std::string digest_of(const Problem& p);

// matrix serialization shared by the formats
MatSeries matrix_from_json_text(const std::string& text); // test helper

} // namespace parhodge
