/* Synthesizes the ECR-native Toffoli, checks it, and runs a small noisy
 * state-tomography experiment.
 *
 *   cc demo.c -I../include -L<target>/debug -ltoffoli_ffi -o demo
 *   ./demo path/to/calibration.json
 */
#include <stdio.h>

#include "toffoli.h"

static int fail(ToffoliStatus s) {
    const char *msg = toffoli_last_error();
    fprintf(stderr, "error %d: %s\n", (int)s, msg ? msg : "(none)");
    return (int)s;
}

int main(int argc, char **argv) {
    ToffoliCircuit *c = NULL;
    ToffoliStatus s = toffoli_circuit_synthesize("ecr-native", &c);
    if (s != TOFFOLI_STATUS_OK) return fail(s);

    ToffoliCircuitInfo info;
    bool ok = false;
    toffoli_circuit_info(c, &info);
    if ((s = toffoli_circuit_is_toffoli(c, &ok)) != TOFFOLI_STATUS_OK) return fail(s);
    printf("gates %zu two_qubit %zu depth %zu toffoli %s\n", info.gates, info.two_qubit_gates, info.depth,
           ok ? "yes" : "no");

    ToffoliNoiseModel *nm = NULL;
    s = argc > 1 ? toffoli_noise_model_load(argv[1], &nm) : toffoli_noise_model_ideal(&nm);
    if (s != TOFFOLI_STATUS_OK) return fail(s);
    double probs[8];
    if ((s = toffoli_simulate_probabilities(c, nm, probs, 8)) != TOFFOLI_STATUS_OK) return fail(s);
    printf("p(000) %.6f\n", probs[0]);

    ToffoliReport *r = NULL;
    s = toffoli_run_qst("{\"input_state\": \"GHZ\", \"shots_per_setting\": 2000, \"repeats\": 3}", &r);
    if (s != TOFFOLI_STATUS_OK) return fail(s);
    ToffoliReportSummary sum;
    toffoli_report_summary(r, &sum);
    printf("qst repeats %zu mean %.4f std %.4f\n", sum.repeats, sum.mean_fidelity, sum.std_fidelity);

    s = toffoli_circuit_synthesize("no-such-strategy", &c);
    printf("bad strategy -> %d\n", (int)s);

    toffoli_report_free(r);
    toffoli_noise_model_free(nm);
    toffoli_circuit_free(c);
    return 0;
}
