#include <stdio.h>
#include <string.h>

#include "pwlham.h"

int main(void) {
    const double ccc[15] = {
        4, 8, -2.5, 1.5, 2.75,
        0, 2, -2, 2.0 / 3.0, 2.0 / 3.0,
        4, 2, -10, -4, -4,
    };
    PwlSystem *sys = NULL;
    if (pwl_system_new_three_zone(ccc, &sys) != PWL_STATUS_OK) {
        fprintf(stderr, "construct: %s\n", pwl_last_error());
        return 1;
    }
    PwlCycle *cycle = NULL;
    if (pwl_find_cycle(sys, &cycle) != PWL_STATUS_OK) {
        fprintf(stderr, "cycle: %s\n", pwl_last_error());
        return 1;
    }
    double ys[4], period;
    pwl_cycle_ordinates(cycle, ys);
    pwl_cycle_period(cycle, &period);
    printf("%.12f %.12f %.12f %.12f %.12f\n", ys[0], ys[1], ys[2], ys[3], period);

    const double degenerate[10] = {1, 1, -1, 0, 0, 1, 1, 1, 0, 0};
    PwlSystem *bad = NULL;
    PwlStatus status = pwl_system_new_two_zone(degenerate, &bad);
    printf("%d %s\n", (int)status, strlen(pwl_last_error()) > 0 ? "error-set" : "no-error");

    pwl_cycle_free(cycle);
    pwl_system_free(sys);
    return 0;
}
