#define MYTASK 10
#define MYGROUP 3
#define ALERT 1
