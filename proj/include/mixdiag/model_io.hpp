#ifndef MIXDIAG_MODEL_IO_HPP
#define MIXDIAG_MODEL_IO_HPP

#include <string>
#include <variant>

#include "mixdiag/models.hpp"

namespace mixdiag {

using AnyModel = std::variant<Var1Model, Varma11Model>;

/// Model file format: a JSON object with fields p, k and the model
/// matrices (A, sigma_xi for VAR(1); Lambda, H, sigma_eta, sigma_xi for
/// VARMA(1,1)) as row-major arrays of arrays. The derived L is never
/// stored; loading re-validates through make_var1 / make_varma11.
std::string model_to_string(const AnyModel& model);
AnyModel model_from_string(const std::string& text);

void save_model(const std::string& path, const AnyModel& model);
AnyModel load_model(const std::string& path);

/// Certificate files mirror the AssumptionCertificate fields.
std::string certificate_to_string(const AssumptionCertificate& cert);
void save_certificate(const std::string& path, const AssumptionCertificate& cert);

int model_dimension(const AnyModel& model);
int model_rank(const AnyModel& model);
bool is_varma(const AnyModel& model);

} // namespace mixdiag

#endif
