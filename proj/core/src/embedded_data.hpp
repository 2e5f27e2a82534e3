#pragma once

#include <cstddef>

// Reference strategy documents compiled into the library at build time
// (definitions are generated from core/data/*.json by cmake/EmbedData.cmake).

namespace qccp::embedded {

extern const unsigned char appendix_d6[];
extern const std::size_t appendix_d6_len;
extern const unsigned char appendix_d7[];
extern const std::size_t appendix_d7_len;
extern const unsigned char appendix_d8[];
extern const std::size_t appendix_d8_len;
extern const unsigned char appendix_d9[];
extern const std::size_t appendix_d9_len;
extern const unsigned char appendix_d10[];
extern const std::size_t appendix_d10_len;

}  // namespace qccp::embedded
