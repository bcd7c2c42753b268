#include <math.h>
#include <stdio.h>
#include "qmanifold.h"

int main(void) {
    QmMetric *m = NULL;
    if (qm_metric_new("cosh(x1)^2", "x1^2", &m) != QM_STATUS_OK) return 1;
    double p[3] = {1.0, 0.0, 0.0};
    double rho[9], tau, tau_star;
    if (qm_ricci(m, p, QM_WHICH_G, rho, &tau, &tau_star) != QM_STATUS_OK) return 2;
    if (fabs(tau + 2.0 / pow(cosh(1.0), 4)) > 1e-12) return 3;
    QmClassification c;
    if (qm_classify(m, p, &c) != QM_STATUS_OK || c.kind != QM_EINSTEIN_KIND_GENERIC) return 4;
    double bad[3] = {0.0, 0.0, 0.0};
    if (qm_metric_at(m, bad, QM_WHICH_G, rho) != QM_STATUS_NOT_POSITIVE_DEFINITE) return 5;
    if (qm_last_error() == NULL) return 6;
    char *json = NULL;
    if (qm_analyze_json(m, p, NULL, &json) != QM_STATUS_OK || json == NULL) return 7;
    qm_string_free(json);
    qm_metric_free(m);
    printf("tau %.12f\n", tau);
    return 0;
}
