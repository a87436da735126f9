#pragma once

#include <Eigen/Dense>
#include <string>

namespace hamlow {

/// 2x2 matrix of a single Pauli operator ('I', 'X', 'Y' or 'Z').
Eigen::Matrix2cd pauli_matrix(char p);

bool is_pauli_char(char p);

/// Dense matrix of a Pauli word over {X,Y,Z}. Character j of the word acts
/// on local bit j, i.e. the local basis index is sum_j b_j 2^j and the
/// matrix is word[t-1] (x) ... (x) word[0] in Kronecker order.
Eigen::MatrixXcd pauli_word_matrix(const std::string& word);

}  // namespace hamlow
