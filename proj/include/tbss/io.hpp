#pragma once
// CSV samples and the JSON formats read and written by the CLI.
//
//   tensor     {"dims": [..], "data": [..]}  (row-major)
//   symmetric  the tensor fields plus {"sym": true, "dim", "order", "packed"}
//   poly       {"nvars", "degree", "terms": [{"j": [..], "gamma": g}, ..]}
//   quantic    {"degree", "gamma": [gamma_0, .., gamma_d]}
//   complex    [re, im]

#include <Eigen/Dense>

#include <complex>
#include <iosfwd>
#include <string>

#include "json.hpp"
#include "tbss/parafac.hpp"
#include "tbss/poly.hpp"
#include "tbss/sylvester.hpp"
#include "tbss/tensor.hpp"

namespace tbss::io {

using Json = nlohmann::ordered_json;

/// Optional header line (any non-numeric first field), then one sample per
/// line. Throws std::invalid_argument naming the offending line.
Eigen::MatrixXd read_csv(std::istream& in);
Eigen::MatrixXd read_csv_file(const std::string& path);
/// Header y1..yn, values with %.17g.
void write_csv(std::ostream& out, const Eigen::MatrixXd& samples);
void write_csv_file(const std::string& path, const Eigen::MatrixXd& samples);

Json read_json_file(const std::string& path);
void write_json_file(const std::string& path, const Json& j, int indent);

Json matrix_to_json(const Eigen::MatrixXd& m);  ///< list of rows
Eigen::MatrixXd matrix_from_json(const Json& j);
Json vector_to_json(const Eigen::VectorXd& v);
Eigen::VectorXd vector_from_json(const Json& j);
Json complex_to_json(std::complex<double> z);

Json tensor_to_json(const DenseTensor& t);
Json sym_tensor_to_json(const SymTensor& t);
DenseTensor tensor_from_json(const Json& j);
/// Accepts the symmetric format, or a dense tensor that is symmetric to 1e-12.
SymTensor sym_tensor_from_json(const Json& j);

Json poly_to_json(const HomogPoly& p);
HomogPoly poly_from_json(const Json& j);

Json quantic_to_json(const BinaryQuantic& q);
BinaryQuantic quantic_from_json(const Json& j);
Json decomposition_to_json(const WaringDecomposition& w);

Json kruskal_to_json(const KruskalFactors& f);
KruskalFactors kruskal_from_json(const Json& j);

}  // namespace tbss::io
