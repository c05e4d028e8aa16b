#include <assert.h>
#include <stdio.h>
#include <string.h>
#include "matcensus.h"

int main(void) {
    printf("%s\n", mc_version());

    McCensusResult *res = NULL;
    McStatus st = mc_count_discr(2, 1, "0", 0, 2, &res);
    assert(st == MC_STATUS_OK);
    uint64_t count = 0;
    assert(mc_census_result_count(res, &count) == MC_STATUS_OK);
    assert(count == 19);
    char *json = NULL;
    assert(mc_census_result_json(res, &json) == MC_STATUS_OK);
    assert(strstr(json, "\"count\":\"19\"") != NULL);
    mc_string_free(json);
    mc_census_result_free(res);

    char *s = NULL;
    assert(mc_r2_count(0, 1, &s) == MC_STATUS_OK);
    assert(strcmp(s, "19") == 0);
    mc_string_free(s);

    int64_t d = 0;
    assert(mc_delta_n(10, &d) == MC_STATUS_OK && d == 4);

    assert(mc_count_discr(2, 2, "0", 100, 1, &res) == MC_STATUS_BUDGET_EXCEEDED);

    char *w = NULL;
    assert(mc_witness_count(3, 1, &w) == MC_STATUS_OK);
    assert(strcmp(w, "108") == 0);
    mc_string_free(w);

    printf("ffi smoke: all checks passed\n");
    return 0;
}
