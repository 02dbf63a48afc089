#include "flowlab/instance.hpp"

namespace flowlab {

long job_class(const Rat& estimate) {
    if (estimate <= 0) throw InvalidInput("job class requires a positive estimate");
    return floor_log2(estimate);
}

Job make_job(JobId id, Rat release, Rat p_true, Rat p_est) {
    Job j;
    j.id = id;
    j.release = std::move(release);
    j.p_true = std::move(p_true);
    j.p_est = std::move(p_est);
    j.cls = job_class(j.p_est);
    return j;
}

void validate_instance(const Instance& inst) {
    for (std::size_t k = 0; k < inst.jobs.size(); ++k) {
        const Job& j = inst.jobs[k];
        if (j.id != static_cast<JobId>(k))
            throw InvalidInput("job ids must be 0..n-1 in order");
        if (j.release < 0) throw InvalidInput("negative release time");
        if (j.p_true <= 0 || j.p_est <= 0)
            throw InvalidInput("volumes and estimates must be positive");
        if (j.cls != job_class(j.p_est))
            throw InvalidInput("cached class disagrees with estimate");
        if (k > 0) {
            const Job& prev = inst.jobs[k - 1];
            if (prev.release > j.release)
                throw InvalidInput("jobs must be sorted by (release, id)");
        }
    }
    if (inst.adaptive) {
        if (inst.adaptive->mu < 1) throw InvalidInput("adaptive oracle requires mu >= 1");
        if (inst.adaptive->snapshot <= 0)
            throw InvalidInput("adaptive oracle requires a positive snapshot time");
    }
}

DistortionStats distortion_of(const Instance& inst) {
    if (inst.adaptive)
        throw InvalidInput("distortion undefined before the adaptive oracle resolves");
    DistortionStats d{Rat(1), Rat(1), Rat(1)};
    for (const Job& j : inst.jobs) {
        Rat under = j.p_true / j.p_est;
        Rat over = j.p_est / j.p_true;
        if (under > d.mu1) d.mu1 = under;
        if (over > d.mu2) d.mu2 = over;
    }
    d.mu = d.mu1 * d.mu2;
    return d;
}

long separator_sigma(const Rat& mu) {
    if (mu < 1) throw InvalidInput("distortion is at least 1");
    return ceil_log2(mu) + 1;
}

}  // namespace flowlab
