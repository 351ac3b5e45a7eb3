#pragma once

#include <string>
#include <vector>

namespace mtskl {

/// Canonical variable dictionary of the PAF feature pipeline: the 22
/// heartbeat descriptors (R/P/T wave morphology, inter-wave intervals and
/// R-R statistics) that dataset manifests are expected to name.
inline const std::vector<std::string>& paf_feature_names() {
    static const std::vector<std::string> names = {
        "R_Position",
        "IdentifiedStructures",
        "R_Max",
        "R_Area",
        "R_Width",
        "R_ini",
        "P_Position",
        "P_Max",
        "P_Area",
        "P_Width",
        "P_ini",
        "PR_Interval",
        "T_Position",
        "T_Max",
        "T_Area",
        "T_Width",
        "T_ini",
        "RT_Interval",
        "RR_Interval",
        "PR_Segment",
        "RR_Interval_50HB_Mean",
        "RR_Interval_5HB_Mean",
    };
    return names;
}

} // namespace mtskl
