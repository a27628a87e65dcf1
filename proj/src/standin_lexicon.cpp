#include "speakerattr/lexicon.hpp"

namespace speakerattr {

// Generated from data/standin_lexicon.dic.
std::string_view standin_lexicon_text() {
  static constexpr std::string_view kText = R"LEX(%
1	ppron
2	i
3	we
4	you
5	shehe
6	they
7	ipron
8	article
9	prep
10	auxverb
11	adverb
12	conj
13	negate
14	quant
15	number
16	posemo
17	negemo
18	anx
19	anger
20	sad
21	affect
22	social
23	family
24	friend
25	female
26	male
27	insight
28	cause
29	tentat
30	compare
31	percept
32	see
33	feel
34	bio
35	body
36	health
37	ingest
38	affiliation
39	achieve
40	power
41	risk
42	focuspast
43	focuspresent
44	focusfuture
45	relativ
46	motion
47	space
48	time
49	work
50	leisure
51	home
52	money
53	relig
54	death
55	informal
56	swear
57	netspeak
58	assent
59	nonflu
60	filler
%
i	1,2
me	1,2
my	1,2
mine	1,2
we	1,3,38
us	1,3
our	1,3
you	1,4
your	1,4
yours	1,4
he	1,5,26
him	1,5,26
his	1,5,26
she	1,5,25
her	1,5,25
they	1,6
them	1,6
their	1,6
i'm	1,2
i'll	1,2
you're	1,4
we're	1,3
myself	2
i've	2
i'd	2
ours	3
ourselves	3
we'll	3
let's	3
yourself	4
you'll	4
u	4,57
ur	4,57
ya	4
hers	5
himself	5
herself	5
he's	5
she's	5
theirs	6
they're	6
it	7
it's	7
its	7
this	7
that	7
these	7
those	7
something	7
anything	7
everything	7
stuff	7
thing*	7
a	8
an	8
the	8
to	9
in	9,47
on	9
at	9
for	9
with	9
from	9
of	9
about	9
into	9
over	9
after	9
before	9
by	9
under	9
around	9
am	10,43
is	10,43
are	10,43
was	10,42
were	10,42
be	10
been	10
have	10
has	10
had	10,42
do	10
does	10
did	10,42
will	10,44
would	10
can	10
could	10
should	10
gonna	10,44,55
wanna	10,55
just	11
really	11
so	11,12
very	11
too	11
actually	11
pretty	11
totally	11
even	11
again	11
also	11
maybe	11,29
and	12
but	12
or	12
because	12,28
if	12
then	12
though	12
while	12
until	12
no	13
not	13
never	13
don't	13
can't	13
won't	13
didn't	13
isn't	13
nothing	13
nope	13
all	14
some	14
many	14
much	14
few	14
more	14
most	14
every	14
lots	14
bunch	14
percent	14
average	14
sampl*	14
one	15
two	15
three	15
four	15
five	15
ten	15
hundred	15
thousand	15
first	15
second	15
half	15
million	15
happ*	16,21
love	16,21
nice	16,21
sweet	16
great	16
good	16
awesome	16
fun	16,21,50
glad	16,21
perfect	16
haha	16,55
lol	16,55,57
sad	17,20,21
hate	17,19,21
awful	17
terrible	17
worr*	17,18,21
nervous	17,18
afraid	17,18
angry	17,19,21
mad	17,19
hurt	17
cry*	17,20,21
lonely	17,20
stupid	17,19
damn	17,55,56
upset	17,21
anxious	18
scared	18,21
fear*	18
panic*	18
tense	18
uneasy	18
stress*	18
annoy*	19
furious	19
pissed	19
rage	19
argu*	19
jerk	19
miss	20
grief	20
heartbr*	20
sorry	20,21
depress*	20
tears	20
mom	22,23,25
dad	22,23,26
sister	22,23,25
brother	22,23,26
friend*	22,24
buddy	22,24
guys	22
talk*	22
party	22,50
family	22,23
people	22
meet	22
mother	23
father	23
aunt	23,25
uncle	23,26
cousin*	23
grandma	23,25
grandpa	23,26
niece	23
nephew	23
parents	23
pal	24
dude	24
bro	24
roommate	24
neighbor*	24
bestie	24
girl*	25
woman	25
women	25
lady	25
queen	25
guy	26
man	26
men	26
boy*	26
king	26
think	27
know	27
realize*	27
understand*	27
consider*	27
idea	27
figure*	27
believe	27
learn*	27
cause	28
why	28
reason*	28
effect*	28
since	28
therefore	28
hence	28
perhaps	29
guess	29
probably	29
might	29
seems	29
unsure	29
kinda	29
sorta	29
than	30
like	30,60
bigger	30
better	30
worse	30
best	30,39
same	30
similar	30
compar*	30
see	31,32
look*	31,32
watch*	31,32
hear*	31
listen*	31
feel*	31,33
touch*	31,33
taste*	31
smell*	31
saw	31,32
seen	32
view*	32
pictur*	32
photo*	32
color*	32
bright	32
glimps*	32
felt	33
hold*	33
hug*	33
soft	33
warm	33
cold	33
pain*	33
body	34,35
sick	34,36
doctor	34,36
eat*	34,37
food	34,37
sleep*	34
tired	34
hungry	34,37
sex*	34
pill*	34,36
blood	34
head	35
hand*	35
face	35
hair	35
heart	35
stomach	35
arm*	35
leg*	35
eye*	35
hospital	36
medic*	36
flu	36
health*	36
clinic	36
ill	36
recover*	36
pizza	37
lunch	37
dinner	37
breakfast	37
drink*	37
beer	37
coffee	37
thai	37
snack*	37
together	38
team	38
ally	38
join*	38
share*	38
social*	38
community	38
partner*	38
win*	39
success*	39
accomplish*	39
goal*	39
earn*	39
achiev*	39
finish*	39
boss	40,49
control*	40
power*	40
lead*	40
command*	40
authorit*	40
important	40
danger*	41
risk*	41
safe*	41
careful	41
warn*	41
threat*	41
secur*	41
avoid*	41
ago	42
yesterday	42,48
remember*	42
used	42
last	42
back	42
graduat*	42
alumni	42
freshman	42
sophomore	42
semester	42
now	43
today	43,48
currently	43
being	43
soon	44,48
tomorrow	44,48
future	44
plan*	44
someday	44
eventually	44
upcoming	44
next	44
visa	44
flight*	44
abroad	44
here	45,47
there	45,47
up	45,47
down	45,47
near	45,47
far	45,47
go	45,46
come	45,46
move*	45,46
time	45,48
day	45,48
going	46
went	46
came	46
walk*	46
drive*	46
ride	46
run*	46
arriv*	46
leav*	46
out	47
inside	47
outside	47
lobby	47
area	47
place	47
week	48
month	48
year	48
hour*	48
minute*	48
tonight	48
later	48
early	48
late	48
work*	49
job	49
office	49
meeting*	49
project*	49
deadline*	49
client*	49
salary	49
coworker*	49
email*	49
report*	49
manager	49
game*	50
movie*	50
tv	50
music	50
play*	50
vacation	50
chill*	50
netflix	50
home	51
house	51
apartment	51
room	51
kitchen	51
bed	51
couch	51
yard	51
rent	51
garage	51
money	52
cash	52
pay*	52
dollar*	52
bank	52
buck*	52
price*	52
cost*	52
cheap	52
expensive	52
bill*	52
owe*	52
god	53
church	53
pray*	53
faith	53
holy	53
heaven	53
soul	53
die	54
dying	54
dead	54
death	54
kill*	54
funeral	54
grave	54
murder*	54
bury*	54
omg	55,57
btw	55,57
yeah	55,58
yep	55,58
ok	55,58
okay	55,58
um	55,59
hmm	55,59
shit	55,56
fuck*	55,56
hell	56
crap	56
ass	56
bitch*	56
piss*	56
lmao	57
brb	57
ttyl	57
idk	57
tbh	57
smh	57
rofl	57
thx	57
pls	57
yes	58
sure	58
agree*	58
alright	58
cool	58
definitely	58
umm	59
uh	59
er	59
sigh	59
erm	59
uhh	59
y'know	60
imean	60
blah	60
whatever	60
anyway*	60
)LEX";
  return kText;
}

}  // namespace speakerattr
