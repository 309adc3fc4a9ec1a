#define MYWD 1
#define MYTASK 7
#define HEARTBEAT 300
#define CONTROLLER 5
