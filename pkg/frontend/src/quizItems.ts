// Generated from config/ils-44.txt by scripts/gen-quiz-items.mjs — do not edit.
export interface QuizItem {
  id: number;
  axis: string;
  prompt: string;
}

export const QUIZ_ITEMS: QuizItem[] = [
  { id: 1, axis: "processing", prompt: "I understand something better after I — (a) try it out; (b) think it through." },
  { id: 2, axis: "perception", prompt: "I would rather be considered — (a) realistic; (b) innovative." },
  { id: 3, axis: "input", prompt: "When I think about yesterday, I mostly get — (a) a picture; (b) words." },
  { id: 4, axis: "understanding", prompt: "I tend to — (a) understand details first, then the whole; (b) grasp the whole first, details later." },
  { id: 5, axis: "processing", prompt: "When I learn something new, it helps me to — (a) talk about it; (b) think about it." },
  { id: 6, axis: "perception", prompt: "If I were a teacher, I would rather teach — (a) facts and real situations; (b) ideas and theories." },
  { id: 7, axis: "input", prompt: "I prefer to get new information from — (a) charts, diagrams or maps; (b) written or spoken explanations." },
  { id: 8, axis: "understanding", prompt: "Once I understand — (a) all the parts, I understand the whole; (b) the whole, I see how the parts fit." },
  { id: 9, axis: "processing", prompt: "In a study group working on hard material, I am more likely to — (a) jump in and contribute ideas; (b) sit back and listen." },
  { id: 10, axis: "perception", prompt: "I find it easier to learn — (a) facts; (b) concepts." },
  { id: 11, axis: "input", prompt: "In a book with lots of pictures and charts, I tend to — (a) look at the pictures and charts; (b) focus on the written text." },
  { id: 12, axis: "understanding", prompt: "When I solve problems, I — (a) work step by step to the solution; (b) often see the answer and then work out the steps." },
  { id: 13, axis: "processing", prompt: "In courses I have taken, I — (a) usually got to know many students; (b) rarely got to know many students." },
  { id: 14, axis: "perception", prompt: "In reading non-fiction, I prefer material that — (a) teaches me new facts or how to do something; (b) gives me new ideas to think about." },
  { id: 15, axis: "input", prompt: "I like teachers who — (a) put a lot of diagrams on the board; (b) spend a lot of time explaining." },
  { id: 16, axis: "understanding", prompt: "When analysing a story, I — (a) collect the incidents and combine them into a theme; (b) sense the theme first, then go back to find evidence." },
  { id: 17, axis: "processing", prompt: "When I start a homework problem, I usually — (a) start working on a solution immediately; (b) try to fully understand the problem first." },
  { id: 18, axis: "perception", prompt: "I prefer the idea of — (a) certainty; (b) theory." },
  { id: 19, axis: "input", prompt: "I remember best — (a) what I have seen; (b) what I have heard." },
  { id: 20, axis: "understanding", prompt: "It is more important to me that a teacher — (a) lays out the material in clear steps; (b) gives an overall picture and relates it to other subjects." },
  { id: 21, axis: "processing", prompt: "I prefer to study — (a) in a group; (b) alone." },
  { id: 22, axis: "perception", prompt: "I am more likely to be considered — (a) careful about the details of my work; (b) creative about how to do my work." },
  { id: 23, axis: "input", prompt: "When I get directions to a new place, I prefer — (a) a map; (b) written instructions." },
  { id: 24, axis: "understanding", prompt: "I learn — (a) at a fairly regular pace, steadily adding pieces; (b) in fits and starts, until it suddenly clicks." },
  { id: 25, axis: "processing", prompt: "I would rather first — (a) try things out; (b) think about how I am going to do them." },
  { id: 26, axis: "perception", prompt: "When I read for fun, I like writers to — (a) clearly say what they mean; (b) say things in creative, surprising ways." },
  { id: 27, axis: "input", prompt: "When I see a diagram or sketch in class, I most remember — (a) the picture; (b) what the teacher said about it." },
  { id: 28, axis: "understanding", prompt: "Facing a body of information, I am more likely to — (a) focus on the details and miss the big picture; (b) grasp the big picture before the details." },
  { id: 29, axis: "processing", prompt: "I more easily remember — (a) something I have done; (b) something I have thought a lot about." },
  { id: 30, axis: "perception", prompt: "When I have to perform a task, I prefer to — (a) master one way of doing it; (b) come up with new ways of doing it." },
  { id: 31, axis: "input", prompt: "When someone shows me data, I prefer — (a) charts or graphs; (b) text summarizing the results." },
  { id: 32, axis: "understanding", prompt: "When writing, I am more likely to — (a) work out the beginning and move forward; (b) write parts in any order and then arrange them." },
  { id: 33, axis: "processing", prompt: "When working on a group project, I first want to — (a) have a group brainstorm where everyone contributes; (b) brainstorm individually and then compare ideas." },
  { id: 34, axis: "perception", prompt: "I consider it higher praise to call someone — (a) sensible; (b) imaginative." },
  { id: 35, axis: "input", prompt: "When I meet people at a party, I later remember — (a) what they looked like; (b) what they said about themselves." },
  { id: 36, axis: "understanding", prompt: "Learning a new subject, I prefer to — (a) stay focused on it and learn as much as I can; (b) draw connections to related subjects." },
  { id: 37, axis: "processing", prompt: "I am more likely to be considered — (a) outgoing; (b) reserved." },
  { id: 38, axis: "perception", prompt: "I prefer courses that emphasize — (a) concrete material such as facts and data; (b) abstract material such as concepts and theories." },
  { id: 39, axis: "input", prompt: "For entertainment, I would rather — (a) watch something; (b) read or listen to something." },
  { id: 40, axis: "understanding", prompt: "Teachers who start with an outline of what they will cover are — (a) very helpful to me, I follow the plan point by point; (b) only somewhat helpful, I build my own overall picture anyway." },
  { id: 41, axis: "processing", prompt: "The idea of doing homework in groups, with one grade for the group — (a) appeals to me; (b) does not appeal to me." },
  { id: 42, axis: "perception", prompt: "When I do long calculations, I — (a) tend to repeat all my steps and check my work carefully; (b) find checking my work tiresome and have to force myself to do it." },
  { id: 43, axis: "input", prompt: "I tend to picture places I have been — (a) easily and fairly accurately; (b) with difficulty and without much detail." },
  { id: 44, axis: "understanding", prompt: "When solving problems in a group, I am more likely to — (a) think of the steps in the solution process; (b) think of consequences or applications in a wide range of areas." },
];
