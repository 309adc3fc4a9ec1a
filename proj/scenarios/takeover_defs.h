#define MYTASK 7
#define SPARE 12
#define TAKEOVER 9
#define MYGROUP 3
