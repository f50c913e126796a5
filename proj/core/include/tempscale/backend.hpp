#pragma once

#include <string>
#include <vector>

#include "tempscale/temperature.hpp"
#include "tempscale/trace.hpp"

namespace tempscale {

struct SampleRequest {
    std::string run_id;
    std::string question_id;
    std::string prompt;
    Temperature temperature;
    long count = 1;
    int round = 1;
    int first_index = 0;  // sample_index of the first record
    uint64_t run_seed = 0;
};

struct SampleBatch {
    std::vector<TraceRecord> records;
    long deficit = 0;  // requested minus delivered
    std::string note;
    bool entropy_is_lower_bound = false;  // top-k renormalized, not full vocab
};

class Sampler {
public:
    virtual ~Sampler() = default;
    virtual SampleBatch sample(const SampleRequest& request) = 0;
};

}  // namespace tempscale
