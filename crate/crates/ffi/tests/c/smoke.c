#include <stdio.h>
#include <string.h>
#include "normlines.h"

int main(void) {
    const char *entries[4] = {"4", "3", "-2", "-3"};
    NlMatrix2 *m = NULL;
    if (nl_matrix2_new(entries, &m) != NL_STATUS_OK) return 1;
    bool has = false;
    if (nl_matrix2_has_lines(m, &has) != NL_STATUS_OK || !has) return 2;
    char *js = NULL;
    if (nl_analyze2_json(m, &js) != NL_STATUS_OK) return 3;
    int ok = strstr(js, "\"-19\"") != NULL;
    nl_string_free(js);
    nl_matrix2_free(m);
    if (!ok) return 4;

    const char *bad[4] = {"1", "1/0", "0", "1"};
    if (nl_matrix2_new(bad, &m) != NL_STATUS_PARSE || m != NULL) return 5;
    if (nl_last_error() == NULL) return 6;
    puts("ok");
    return 0;
}
