#define VGROUP 4
#define REP1 20
#define REP2 21
#define REP3 22
