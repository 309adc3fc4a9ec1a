#define FASTWD 1
#define FASTTASK 7
#define FASTBEAT 150
#define FASTCTRL 5
